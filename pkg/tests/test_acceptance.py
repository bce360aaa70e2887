"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines.  Criterion 3's Manning-Rosen leg is expected to fail: the published
closed form is not a solution of the published reduced equation on any
branch (see the assertion message and notes/decisions.md); the other nine
criteria and the remaining two thirds of criterion 3 pass.
"""

import json
import math
import time

import numpy as np
import pytest

from ptspec import nu_engine, oracle, spectra, wavefunctions
from ptspec.cli import main as cli_main
from ptspec.core_math import LowPoly
from ptspec.errors import NoAdmissibleBranch
from ptspec.potentials import (
    Family,
    PotentialSpec,
    Variant,
    apply_variant,
    default_domain,
    evaluate,
    pt_symmetry_check,
)

_ACCEPTANCE_TRACES = []  # collected accepted branches for criterion 8


def _report(tag, ok, detail=""):
    print(f"ACCEPTANCE {tag}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def _trig(A, alpha=1.0):
    return PotentialSpec(family=Family.TrigScarf, A=A, alpha=alpha)


def _richardson(e_coarse, e_fine, h_coarse, h_fine):
    return (e_fine * h_coarse**2 - e_coarse * h_fine**2) / (h_coarse**2 - h_fine**2)


class TestCriterion1:
    def test_trig_scarf_oracle_match(self, trig_a2_spec, trig_a2_eigs_3000, trig_a2_eigs_1500):
        t0 = time.perf_counter()
        res = spectra.closed_form_spectrum(trig_a2_spec, 3)
        closed = np.array([e.real for e in res.energies()])
        target = np.array([(n + 2.0) ** 2 for n in range(4)])
        assert np.max(np.abs(closed - target)) < 1e-12

        H3, eigs3, t_3000 = trig_a2_eigs_3000
        H1, eigs1, t_1500 = trig_a2_eigs_1500
        rel = np.abs(eigs3[:4].real - target) / target
        assert np.max(rel) <= 1e-3

        ext = _richardson(eigs1[:4].real, eigs3[:4].real, H1.h, H3.h)
        assert np.max(np.abs(ext - target)) <= 1e-5

        for n in range(4):
            _, trace = nu_engine.solve_level(trig_a2_spec, n, seed_energy=target[n])
            _ACCEPTANCE_TRACES.append(trace)

        runtime = (time.perf_counter() - t0) + t_3000 + t_1500
        assert runtime <= 60.0
        _report(
            "1 trig-scarf oracle match",
            True,
            f"max rel err {np.max(rel):.2e}, Richardson defect {np.max(np.abs(ext-target)):.2e}, "
            f"runtime {runtime:.1f}s",
        )


class TestCriterion2:
    def test_box_limit(self, box_eigs_3000):
        spec, H, eigs, _ = box_eigs_3000
        res = spectra.closed_form_spectrum(spec, 3)
        target = np.array([(n + 1.0) ** 2 for n in range(4)])
        closed = np.array([e.real for e in res.energies()])
        assert np.max(np.abs(closed - target) / target) <= 1e-12
        rel = np.abs(eigs[:4].real - target) / target
        assert np.max(rel) <= 1e-4
        _report("2 box limit", True, f"max rel err {np.max(rel):.2e}")


_C3_TRIG = [_trig(-2.0), _trig(-6.0), _trig(-0.5, alpha=2.0)]
_C3_HYP = [
    PotentialSpec(family=Family.HyperbolicScarf, V0=0.0, V1=5.0, V2=0.0, q=1.0),
    PotentialSpec(family=Family.HyperbolicScarf, V0=1.0, V1=2.5, V2=0.0, q=1.0, alpha=0.8),
]
_C3_MR = [
    PotentialSpec(family=Family.ManningRosen, A=-120.0, B=2.0, q=1.0),
    PotentialSpec(family=Family.ManningRosen, A=-130.0, B=5.0, q=1.0),
]


def _pipeline_vs_closed(spec, n_max=5):
    num = nu_engine.solve_spectrum_numeric(spec, n_max)
    ref = spectra.closed_form_spectrum(spec, n_max)
    _ACCEPTANCE_TRACES.extend(num.traces)
    worst = 0.0
    for (_, a), (_, b) in zip(num.entries, ref.entries):
        worst = max(worst, abs(a - b) / (1e-300 + abs(b)))
    return worst, num, ref


class TestCriterion3:
    def test_trig_and_hyperbolic_consistency(self):
        t0 = time.perf_counter()
        worst = 0.0
        for spec in _C3_TRIG + _C3_HYP:
            w, _, _ = _pipeline_vs_closed(spec)
            worst = max(worst, w)
        runtime = time.perf_counter() - t0
        ok = worst <= 1e-8 and runtime <= 10.0
        _report("3a/3b pipeline vs closed form (trig, hyperbolic V2=0)", ok, f"worst rel {worst:.2e}, {runtime:.1f}s")
        assert ok

    def test_manning_rosen_consistency(self):
        # Expected to fail: the published bracket is
        #   (1/4) L^2 + beta^2/(4 L^2)  with  L = sqrt(1+gamma/q) - (2n+1),
        # while the termination condition of the published reduced equation
        # has roots
        #   (1/4) L'^2 + beta^2/L'^2    with  L' = sqrt(1+gamma/q) + (2n+1)
        # (grid-oracle-confirmed on these deep wells, which hold >= 6 bound
        # states each).  No parameter set can reconcile the two for all
        # n <= 5, and the roots matching the published bracket at beta = 0
        # sit on branches with tau' > 0 at the root, which criterion 8
        # forbids the pipeline from accepting.
        worst = 0.0
        detail = []
        for spec in _C3_MR:
            w, num, ref = _pipeline_vs_closed(spec)
            worst = max(worst, w)
            detail.append(
                f"A={spec.A.real:g},B={spec.B.real:g}: pipeline E0={num.entries[0][1].real:.6g} "
                f"vs closed E0={ref.entries[0][1].real:.6g}"
            )
        ok = worst <= 1e-8
        _report("3c pipeline vs closed form (manning-rosen q=1)", ok, f"worst rel {worst:.2e}")
        assert ok, (
            "published Manning-Rosen bracket is not a root of the published "
            "reduced equation on any admissible branch; " + "; ".join(detail)
        )


class TestCriterion4:
    def test_spectrum_collapse(self):
        rng = np.random.default_rng(5)
        worst = 0.0
        for _ in range(20):
            A = float(rng.uniform(-4, 4))
            alpha = float(rng.uniform(0.3, 3.0))
            base = PotentialSpec(family=Family.TrigScarf, A=A, alpha=alpha, q=1.0)
            e_pt = spectra.closed_form_spectrum(apply_variant(base, Variant.PT), 5).energies()
            e_qpt = spectra.closed_form_spectrum(apply_variant(base, Variant.QDeformedPT), 5).energies()
            for a, b in zip(e_pt, e_qpt):
                worst = max(worst, abs(a - b) / (1 + abs(a)))
        assert worst <= 1e-15
        _report("4 spectrum q->1 collapse", True, f"worst rel {worst:.2e}")

    def test_potential_collapse_per_family(self):
        worst = 0.0
        # trig: deformed PT at q=1 against the undeformed PT form
        base = PotentialSpec(family=Family.TrigScarf, A=-1.5, q=1.0)
        xs = np.linspace(0.3, 3.0, 200)
        v1 = evaluate(apply_variant(base, Variant.QDeformedPT), xs)
        v2 = evaluate(apply_variant(base, Variant.PT), xs)
        worst = max(worst, float(np.max(np.abs(v1 - v2) / (1 + np.abs(v2)))))
        # hyperbolic: q=1 against the classic coth/sinh form
        spec = PotentialSpec(family=Family.HyperbolicScarf, V0=2.0, V1=3.0, V2=-1.0, q=1.0)
        xs = np.linspace(0.4, 3.5, 200)
        classic = 2.0 + 3.0 / np.tanh(xs) ** 2 - 1.0 / np.tanh(xs) / np.sinh(xs)
        worst = max(worst, float(np.max(np.abs(evaluate(spec, xs) - classic) / (1 + np.abs(classic)))))
        # manning-rosen: q=1 against the classic form
        spec = PotentialSpec(family=Family.ManningRosen, A=-4.0, B=2.0, q=1.0)
        classic = -4.0 / np.tanh(xs) + 2.0 / np.sinh(xs) ** 2
        worst = max(worst, float(np.max(np.abs(evaluate(spec, xs) - classic) / (1 + np.abs(classic)))))
        assert worst <= 1e-13
        _report("4 potential q->1 collapse", True, f"worst pointwise rel {worst:.2e}")


class TestCriterion5:
    def test_pt_spectral_signature(self):
        spec = PotentialSpec(family=Family.HyperbolicScarf, variant=Variant.PT, V0=1.0, V1=1.0, V2=1.0, q=1.0)
        rep = pt_symmetry_check(spec, np.linspace(-2, 2, 101), tol=1e-12)
        assert rep.verdict
        dom = default_domain(spec, L=8.0)
        eigs = oracle.eigen_complex_dense(oracle.discretize(spec, dom, 1600))
        conj = oracle.conjugation_pair_check(eigs, tol=1e-8)
        assert conj.closed
        _report(
            "5 PT spectral signature",
            True,
            f"pt defect {rep.max_defect:.1e}; {conj.real_count} real, {conj.pair_count} pairs",
        )


class TestCriterion6:
    def test_trig_scarf_predicates(self):
        ok_spec = PotentialSpec(family=Family.TrigScarf, variant=Variant.NonPT, A=3j, q=2.0)
        res = spectra.closed_form_spectrum(ok_spec, 5)
        assert spectra.reality_conditions(ok_spec).verdict
        assert all(abs(e.imag) <= 1e-12 * (1 + abs(e.real)) for e in res.energies())
        bad = PotentialSpec(family=Family.TrigScarf, variant=Variant.NonPT, A=1 + 3j, q=2.0)
        res_bad = spectra.closed_form_spectrum(bad, 5)
        assert any(abs(e.imag) > 1e-6 for e in res_bad.energies())
        _report("6 reality predicates (trig)", True, "A1=0 real; A1=1 complex")

    def test_hyperbolic_predicates_as_printed(self):
        ok_spec = PotentialSpec(
            family=Family.HyperbolicScarf, variant=Variant.NonPT, V0=0.5, V1=0.0, V2=0.5, q=1.0
        )
        conds = spectra.reality_conditions(ok_spec)
        assert conds.verdict
        res = spectra.closed_form_spectrum(ok_spec, 5)
        assert all(abs(e.imag) <= 1e-12 * (1 + abs(e.real)) for e in res.energies())
        bad = PotentialSpec(family=Family.HyperbolicScarf, variant=Variant.NonPT, V0=0.5, V1=1.0, V2=0.5, q=1.0)
        assert not spectra.reality_conditions(bad).verdict
        assert any(abs(e.imag) > 1e-6 for e in spectra.closed_form_spectrum(bad, 5).energies())
        _report("6 reality predicates (hyperbolic)", True, "Re(V1)=0, Im(V2)=0 real; violated complex")

    def test_manning_rosen_predicates_as_printed(self):
        ok_spec = PotentialSpec(family=Family.ManningRosen, variant=Variant.NonPT, A=349.5j, B=-174.75, q=1.0)
        conds = spectra.reality_conditions(ok_spec)
        assert conds.verdict
        res = spectra.closed_form_spectrum(ok_spec, 5)
        for (_, e), (_, ea) in zip(res.entries, res.alt_entries):
            assert abs(e.imag) <= 1e-10 * (1 + abs(e.real))
            assert abs(ea.imag) <= 1e-10 * (1 + abs(ea.real))
        bad = PotentialSpec(
            family=Family.ManningRosen, variant=Variant.NonPT, A=1.0 + 349.5j, B=-174.75, q=1.0
        )
        assert not spectra.reality_conditions(bad).verdict
        assert any(abs(e.imag) > 1e-6 for e in spectra.closed_form_spectrum(bad, 5).energies())
        _report("6 reality predicates (manning-rosen)", True, "printed a^2/b^2 window real; violated complex")


class TestCriterion7:
    def test_wavefunction_residuals_nodes_orthogonality(self, trig_a2_spec, trig_a2_eigs_3000):
        H, _, _ = trig_a2_eigs_3000
        dom = default_domain(trig_a2_spec)
        xs = H.nodes()
        wfs = []
        worst_resid = 0.0
        for n in range(5):
            e_n, trace = nu_engine.solve_level(trig_a2_spec, n, seed_energy=(n + 2.0) ** 2)
            wf = wavefunctions.normalize(wavefunctions.assemble(trig_a2_spec, trace, n), dom, 3001)
            wfs.append(wf)
            assert wavefunctions.node_count(wf, dom) == n
            if n <= 3:
                psi = wavefunctions.eval_psi(wf, xs)
                resid = np.linalg.norm(H.matvec(psi) - e_n * psi) / np.linalg.norm(psi)
                worst_resid = max(worst_resid, float(resid))
        assert worst_resid <= 1e-3
        from scipy.integrate import simpson

        grid = np.linspace(dom.left, dom.right, 4003)[1:-1]
        worst_overlap = 0.0
        samples = [wavefunctions.eval_psi(w, grid) for w in wfs[:4]]
        for m in range(4):
            for n in range(m + 1, 4):
                ip = abs(simpson(np.conj(samples[m]) * samples[n], x=grid))
                worst_overlap = max(worst_overlap, float(ip))
        assert worst_overlap <= 1e-6
        _report(
            "7 wavefunction residual/nodes/orthogonality",
            True,
            f"worst residual {worst_resid:.2e}, worst overlap {worst_overlap:.2e}",
        )


class TestCriterion8:
    def test_structural_invariants_on_acceptance_runs(self):
        assert _ACCEPTANCE_TRACES, "criteria 1 and 3 must run first"
        for trace in _ACCEPTANCE_TRACES:
            assert trace.tau_slope.real < 0.0
            for c in trace.candidates:
                assert c.square_residual <= 1e-10
                assert c.tau.c0 == trace.form.tau_tilde.c0 + 2 * c.pi.c0
                assert c.tau.c1 == trace.form.tau_tilde.c1 + 2 * c.pi.c1
                assert c.lam == c.k + c.pi.c1
        _report("8 NU structural invariants", True, f"{len(_ACCEPTANCE_TRACES)} accepted traces audited")

    def test_synthetic_fixture_raises(self):
        form = nu_engine.synthetic_form(LowPoly(1, 0, 1), LowPoly(0, 1, 0), LowPoly(0, 0, 0.25))
        with pytest.raises(NoAdmissibleBranch) as err:
            nu_engine.select_branch(form)
        assert all(c.tau_slope.real >= 0 for c in err.value.candidates)
        _report("8 synthetic tau'>0 fixture", True, "NoAdmissibleBranch with four rejections")


class TestCriterion9:
    def test_sign_resolution_study(self):
        spec = PotentialSpec(family=Family.ManningRosen, A=-4.0, B=2.0, q=1.0)
        threshold = oracle.continuum_threshold(spec)
        res = spectra.closed_form_spectrum(spec, 3)
        report = {"threshold": threshold, "runs": [], "verdict": None}
        matched_any = False
        for L, N in ((12.0, 2400), (16.0, 3200)):
            dom = default_domain(spec, L=L)
            eigs = oracle.eigen_complex_dense(oracle.discretize(spec, dom, N))
            below = [complex(z) for z in eigs if z.real < threshold]
            finite_entries = [(n, e) for n, e in res.entries if np.isfinite(e.real)]
            plus = oracle.match_levels(finite_entries, eigs, threshold)
            minus = oracle.match_levels([(n, -e) for n, e in finite_entries], eigs, threshold)
            report["runs"].append(
                {
                    "L": L,
                    "N": N,
                    "bound_states_below_threshold": len(below),
                    "matched_plus_sign": len(plus.pairs),
                    "matched_minus_sign": len(minus.pairs),
                    "lowest_oracle": float(eigs[0].real),
                }
            )
            matched_any = matched_any or plus.pairs or minus.pairs

        if not matched_any:
            # errata path: the potential is monotone (A + 2B coth has no
            # interior minimum at these parameters), so nothing exists
            # below the continuum threshold under either sign.  Record the
            # discrepancy rather than silently adjusting the formula.
            report["verdict"] = (
                "no oracle bound state below threshold A; published levels "
                "unmatched under either sign; discrepancy recorded"
            )
            # the published value is retained verbatim (no silent fix)
            assert abs(res.entries[0][1] - 2.0) < 1e-14
            assert "oracle" in res.convention_note
            # supporting evidence on a deep well that does bind: the
            # pipeline bracket matches the oracle to the stated 5e-3
            deep = PotentialSpec(family=Family.ManningRosen, A=-40.0, B=2.0, q=1.0)
            dom = default_domain(deep, L=16.0)
            eigs = oracle.eigen_complex_dense(oracle.discretize(deep, dom, 3200))
            num = nu_engine.solve_spectrum_numeric(deep, 2)
            match = oracle.match_levels(num.entries, eigs, oracle.continuum_threshold(deep))
            assert len(match.pairs) == 3
            assert match.max_rel_err <= 5e-3
            report["deep_well_check"] = {
                "params": "A=-40, B=2, q=1",
                "pipeline_vs_oracle_max_rel": match.max_rel_err,
                "resolved_sign": "negative (bound states below threshold)",
            }
            _report(
                "9 manning-rosen sign resolution",
                True,
                "errata path: " + json.dumps(report["runs"][0]) + f"; deep-well max rel {match.max_rel_err:.1e}",
            )
        else:  # pragma: no cover - not reachable for these parameters
            _report("9 manning-rosen sign resolution", True, "matched levels found")
        assert report["verdict"] or matched_any


class TestCriterion10:
    @pytest.mark.parametrize("k", range(1, 9))
    def test_presets(self, k, capsys, tmp_path):
        preset = f"fig{k}"
        out = tmp_path / f"{preset}.csv"
        code = cli_main(["profile", "--preset", preset, "--format", "csv", "--out", str(out)])
        assert code == 0
        lines = out.read_text().strip().splitlines()
        assert lines[0] == "x,re_V,im_V"
        body = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
        assert np.all(np.isfinite(body))
        ims = np.abs(body[:, 2])
        if k in (1, 2, 4):  # real forms (fig2 is the q=1 cosine form)
            assert np.max(ims) == 0.0
        else:  # complex PT/non-PT forms carry a populated imaginary column
            assert np.max(ims) > 1e-3
        _report(f"10 preset {preset}", True, f"{body.shape[0]} pole-free samples")

    def test_caption_parameters_exact(self, tmp_path):
        expects = {
            "fig1": {"V0": 10, "V1": 15, "V2": 10, "q": 10},
            "fig2": {"V0": 1, "V1": 1, "V2": 1, "q": 1},
            "fig4": {"A": 10, "B": 1, "q": -4},
            "fig5": {"A": 1, "B": 1, "q": 1},
            "fig7": {"A": 1 + 1j, "B": 1 + 1j, "q": 1},
        }
        for preset, params in expects.items():
            out = tmp_path / f"{preset}.json"
            assert cli_main(["profile", "--preset", preset, "--out", str(out)]) == 0
            got = json.loads(out.read_text())["spec"]["params"]
            for key, val in params.items():
                if key == "q":
                    assert got["q"] == val
                else:
                    val = complex(val)
                    assert got[key] == {"re": val.real, "im": val.imag}
            assert got["alpha"] == 1
