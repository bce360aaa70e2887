#!/usr/bin/env python3
"""Write the fig1..fig8 potential-profile CSVs into a directory.

Usage:
    python scripts/emit_profiles.py [outdir]
"""

import os
import sys

from ptspec.cli import main as cli_main


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    outdir = argv[0] if argv else "profiles"
    os.makedirs(outdir, exist_ok=True)
    for k in range(1, 9):
        dest = os.path.join(outdir, f"fig{k}.csv")
        code = cli_main(["profile", "--preset", f"fig{k}", "--format", "csv", "--out", dest])
        if code != 0:
            return code
        print(f"wrote {dest}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
