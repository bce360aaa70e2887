"""Command-line entry point.

Commands:
  spectrum   closed-form energies for a potential spec
  verify     formula-vs-oracle level matching with a convergence bound
  profile    sampled potential values (CSV), incl. the fig1..fig8 presets
  trace      derivation record (all four branch candidates) as JSON

Exit codes: 0 success, 1 usage error, 2 condition warnings under --strict,
3 numerical non-convergence.  JSON is the canonical format; CSV is a
projection.  Outputs are deterministic (sorted keys, no timestamps) and
written atomically.

Potential-spec JSON schema (accepted by --spec-json and embedded in every
output under "spec"): {"family": str, "variant": str, "params": {"A"|"B"|
"V0"|"V1"|"V2": {"re": float, "im": float}|null, "alpha": float,
"q": float|null, "period": float|null}, "constants": {"mass": float,
"hbar": float}}.  Complex values always use the {re, im} pair.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile

import numpy as np

from . import nu_engine, oracle, spectra
from .errors import (
    NoAdmissibleBranch,
    PtspecError,
    QRNotConverged,
    RootNotConverged,
    SingularityError,
)
from .core_math import LowPoly
from .potentials import (
    DomainKind,
    DomainSpec,
    Family,
    PotentialSpec,
    Variant,
    apply_variant,
    default_domain,
    evaluate_grid,
)

_EXIT_OK = 0
_EXIT_USAGE = 1
_EXIT_CONDITION = 2
_EXIT_NONCONVERGED = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        raise _UsageError(message)


# fig1..fig8 presets: caption parameter sets, with profile window (L, N)
_PRESETS = {
    "fig1": (dict(family=Family.HyperbolicScarf, V0=10.0, V1=15.0, V2=10.0, q=10.0, alpha=1.0), 6.0, 400),
    "fig2": (
        dict(family=Family.HyperbolicScarf, variant=Variant.PT, V0=1.0, V1=1.0, V2=1.0, q=1.0, alpha=1.0),
        6.0,
        400,
    ),
    "fig3": (
        dict(
            family=Family.HyperbolicScarf,
            variant=Variant.NonPT,
            V0=10.0,
            V1=15.0 * (1 + 1j),
            V2=10.0 * (1 + 1j),
            q=10.0,
            alpha=1.0,
        ),
        4.0,
        400,
    ),
    "fig4": (dict(family=Family.ManningRosen, A=10.0, B=1.0, q=-4.0, alpha=1.0), 3.0, 400),
    "fig5": (dict(family=Family.ManningRosen, variant=Variant.PT, A=1.0, B=1.0, q=1.0, alpha=1.0), 6.0, 400),
    "fig6": (dict(family=Family.ManningRosen, variant=Variant.PT, A=1.0, B=1.0, q=1.0, alpha=1.0), 6.0, 400),
    "fig7": (
        dict(family=Family.ManningRosen, variant=Variant.NonPT, A=1.0 + 1j, B=1.0 + 1j, q=1.0, alpha=1.0),
        3.0,
        400,
    ),
    "fig8": (
        dict(family=Family.ManningRosen, variant=Variant.NonPT, A=1.0 + 1j, B=1.0 + 1j, q=1.0, alpha=1.0),
        3.0,
        400,
    ),
}


def _add_shared(p: argparse.ArgumentParser):
    p.add_argument("--family", choices=[f.value for f in Family])
    p.add_argument("--variant", choices=[v.value for v in Variant], default="base")
    p.add_argument("--A", type=float)
    p.add_argument("--A1", type=float)
    p.add_argument("--A2", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--B1", type=float)
    p.add_argument("--B2", type=float)
    p.add_argument("--V0", type=float)
    p.add_argument("--V1", type=float)
    p.add_argument("--V2", type=float)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--q", type=float)
    p.add_argument("--period", type=float)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--mass", type=float, default=0.5)
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--N", type=int, default=3000)
    p.add_argument("--L", type=float, default=12.0)
    p.add_argument("--tol", type=float, default=1e-3)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--out")
    p.add_argument("--preset", choices=sorted(_PRESETS))
    p.add_argument("--strict", action="store_true")
    p.add_argument("--skip-poles", action="store_true")
    p.add_argument("--spec-json", help="load the potential spec from a JSON file")


def _build_spec(args) -> PotentialSpec:
    if args.preset:
        kw, _, _ = _PRESETS[args.preset]
        return PotentialSpec(**kw)
    if args.spec_json:
        with open(args.spec_json) as fh:
            return PotentialSpec.from_json(fh.read())
    if not args.family:
        raise _UsageError("--family is required (or use --preset/--spec-json)")
    family = Family(args.family)
    variant = Variant(args.variant)
    common = dict(alpha=args.alpha, q=args.q, period=args.period, mass=args.mass, hbar=args.hbar)

    def split(re_flag, parts, name):
        re_v, (p1, p2) = re_flag, parts
        if p1 is not None or p2 is not None:
            if variant is not Variant.NonPT:
                raise _UsageError(f"--{name}1/--{name}2 need --variant nonpt")
            return complex(p1 or 0.0, p2 or 0.0)
        return re_v

    a_val = split(args.A, (args.A1, args.A2), "A")
    b_val = split(args.B, (args.B1, args.B2), "B")
    explicit_complex = isinstance(a_val, complex) or isinstance(b_val, complex)
    try:
        if variant is Variant.Base or explicit_complex:
            return PotentialSpec(
                family=family, variant=variant, A=a_val, B=b_val, V0=args.V0, V1=args.V1, V2=args.V2, **common
            )
        base = PotentialSpec(family=family, A=a_val, B=b_val, V0=args.V0, V1=args.V1, V2=args.V2, **common)
        return apply_variant(base, variant)
    except (ValueError, PtspecError) as err:
        raise _UsageError(str(err)) from err


def _write_out(text: str, out_path: str | None):
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
        return
    d = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ptspec-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def cmd_spectrum(args) -> int:
    spec = _build_spec(args)
    res = spectra.closed_form_spectrum(spec, args.n_max)
    payload = res.to_dict()
    payload["spec"] = spec.to_dict()
    if args.format == "csv":
        lines = ["n,re_E,im_E"]
        for n, e in res.entries:
            lines.append(f"{n},{e.real:.15g},{e.imag:.15g}")
        _write_out("\n".join(lines) + "\n", args.out)
    else:
        _write_out(_json_dump(payload), args.out)
    if args.strict and res.warnings:
        sys.stderr.write("condition warnings: " + "; ".join(res.warnings) + "\n")
        return _EXIT_CONDITION
    return _EXIT_OK


def cmd_verify(args) -> int:
    spec = _build_spec(args)
    domain = default_domain(spec, L=args.L)
    res = spectra.closed_form_spectrum(spec, args.n_max)
    n_half = max(args.N // 2, 50)
    study = oracle.convergence_study(spec, domain, [n_half, args.N])
    H = oracle.discretize(spec, domain, args.N)
    eigs = oracle.eigen_complex_dense(H)
    thr = oracle.continuum_threshold(spec)
    match = oracle.match_levels(res.entries, eigs, thr)
    conj = oracle.conjugation_pair_check(eigs, tol=1e-8)
    failures = []
    err_by_level = [lv.err_estimate for lv in study.levels]
    for i, (n, e_f, lam, rel) in enumerate(match.pairs):
        est = err_by_level[i] if i < len(err_by_level) else (err_by_level[-1] if err_by_level else 0.0)
        bound = max(10.0 * est, args.tol * max(abs(lam), 1.0))
        if abs(e_f - lam) > bound:
            failures.append({"n": n, "abs_err": abs(e_f - lam), "bound": bound})
    payload = {
        "spec": spec.to_dict(),
        "domain": {"left": domain.left, "right": domain.right, "kind": domain.kind.value},
        "N": args.N,
        "threshold": thr if math.isfinite(thr) else None,
        "match": match.to_dict(),
        "conjugation": {
            "real_count": conj.real_count,
            "pair_count": conj.pair_count,
            "unpaired": conj.unpaired,
            "max_defect": conj.max_defect if math.isfinite(conj.max_defect) else None,
            "closed": conj.closed,
        },
        "convergence": study.to_dict(),
        "failures": failures,
    }
    _write_out(_json_dump(payload), args.out)
    if failures:
        sys.stderr.write(f"{len(failures)} matched level(s) outside the convergence bound\n")
        return _EXIT_CONDITION
    return _EXIT_OK


def cmd_profile(args) -> int:
    if args.preset:
        kw, L, npts = _PRESETS[args.preset]
        spec = PotentialSpec(**kw)
        skip = True
    else:
        spec = _build_spec(args)
        L, npts = args.L, max(args.N, 50)
        skip = args.skip_poles
    if args.x_min is not None or args.x_max is not None:
        if args.x_min is None or args.x_max is None or not args.x_max > args.x_min:
            raise _UsageError("--x-min and --x-max must both be given with x_max > x_min")
        left, right = args.x_min, args.x_max
    else:
        domain = default_domain(spec, L=L)
        left, right = domain.left, domain.right
    xs = np.linspace(left, right, npts + 2)[1:-1]
    try:
        xs_kept, vals = evaluate_grid(spec, xs, skip_poles=skip)
    except SingularityError as err:
        sys.stderr.write(f"grid touches a pole ({err}); re-run with --skip-poles\n")
        return _EXIT_USAGE
    if args.format == "json":
        payload = {
            "spec": spec.to_dict(),
            "samples": [{"x": float(x), "re": v.real, "im": v.imag} for x, v in zip(xs_kept, vals)],
        }
        _write_out(_json_dump(payload), args.out)
    else:
        lines = ["x,re_V,im_V"]
        for x, v in zip(xs_kept, vals):
            lines.append(f"{x:.12g},{v.real:.12g},{v.imag:.12g}")
        _write_out("\n".join(lines) + "\n", args.out)
    return _EXIT_OK


def _poly_from_json(obj) -> LowPoly:
    return LowPoly(*(complex(c["re"], c["im"]) for c in obj))


def cmd_trace(args) -> int:
    if args.form_json:
        with open(args.form_json) as fh:
            raw = json.load(fh)
        form = nu_engine.synthetic_form(
            _poly_from_json(raw["sigma"]),
            _poly_from_json(raw["tau_tilde"]),
            _poly_from_json(raw["sigma_tilde"]),
        )
        try:
            trace = nu_engine.select_branch(form)
        except NoAdmissibleBranch as err:
            payload = {
                "error": "NoAdmissibleBranch",
                "branches": [
                    {
                        "k": {"re": c.k.real, "im": c.k.imag},
                        "sign": c.sign,
                        "tau_slope": {"re": c.tau_slope.real, "im": c.tau_slope.imag},
                        "rejection": c.rejection,
                    }
                    for c in err.candidates
                ],
            }
            _write_out(_json_dump(payload), args.out)
            return _EXIT_NONCONVERGED
        _write_out(nu_engine.trace_to_json(trace), args.out)
        return _EXIT_OK
    spec = _build_spec(args)
    seed = None
    try:
        seed = spectra.closed_form_spectrum(spec, args.n).entries[args.n][1]
    except Exception:
        seed = None
    try:
        _, trace = nu_engine.solve_level(spec, args.n, seed_energy=seed)
    except NoAdmissibleBranch as err:
        payload = {
            "error": "NoAdmissibleBranch",
            "spec": spec.to_dict(),
            "branches": [
                {
                    "k": {"re": c.k.real, "im": c.k.imag},
                    "sign": c.sign,
                    "tau_slope": {"re": c.tau_slope.real, "im": c.tau_slope.imag},
                    "rejection": c.rejection,
                }
                for c in err.candidates
            ],
        }
        _write_out(_json_dump(payload), args.out)
        return _EXIT_NONCONVERGED
    except (RootNotConverged, QRNotConverged) as err:
        sys.stderr.write(f"{err}\n")
        return _EXIT_NONCONVERGED
    out = json.loads(nu_engine.trace_to_json(trace))
    out["spec"] = spec.to_dict()
    _write_out(_json_dump(out), args.out)
    return _EXIT_OK


def make_parser() -> _Parser:
    parser = _Parser(prog="ptspec", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in (
        ("spectrum", cmd_spectrum),
        ("verify", cmd_verify),
        ("profile", cmd_profile),
        ("trace", cmd_trace),
    ):
        p = sub.add_parser(name)
        _add_shared(p)
        if name == "trace":
            p.add_argument("--n", type=int, default=0)
            p.add_argument("--form-json", help="trace a raw (sigma, tau_tilde, sigma_tilde) triple")
        if name == "profile":
            p.add_argument("--x-min", type=float)
            p.add_argument("--x-max", type=float)
        p.set_defaults(func=fn)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return _EXIT_USAGE
    try:
        return args.func(args)
    except _UsageError as err:
        sys.stderr.write(f"usage error: {err}\n")
        return _EXIT_USAGE
    except (RootNotConverged, QRNotConverged, NoAdmissibleBranch) as err:
        sys.stderr.write(f"non-convergence: {err}\n")
        return _EXIT_NONCONVERGED
    except SingularityError as err:
        sys.stderr.write(f"singular evaluation: {err}\n")
        return _EXIT_USAGE
    except (ValueError, OSError, PtspecError) as err:
        sys.stderr.write(f"error: {err}\n")
        return _EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
