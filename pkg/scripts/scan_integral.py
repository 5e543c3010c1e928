#!/usr/bin/env python3
"""Sample the reduced integral I(u) on a grid and write CSV.

Example:
    python scripts/scan_integral.py --example 3b --grid 500 --out iu.csv
"""

import argparse
import sys

import numpy as np

from isochrone.analysis import find_zeros, i_u_form
from isochrone.perturbation import PerturbationSpec
from isochrone.presets import EXAMPLE_NAMES, example_spec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--coeffs", help="comma-separated a_0,...,a_n")
    ap.add_argument("--example", choices=EXAMPLE_NAMES)
    ap.add_argument("--grid", type=int, default=500)
    ap.add_argument("--delta", type=float, default=1e-3)
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    args = ap.parse_args()

    if args.example:
        spec = example_spec(args.example)
    elif args.coeffs:
        spec = PerturbationSpec.from_coeffs(
            [float(c) for c in args.coeffs.split(",")]
        )
    else:
        ap.error("one of --coeffs / --example is required")

    uf = i_u_form(spec)
    us = np.linspace(args.delta, 1.0 - args.delta, args.grid)
    vals = uf(us)
    lines = ["u,I"] + [f"{u:.17g},{v:.17g}" for u, v in zip(us, vals)]
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)

    report = find_zeros(spec)
    for u, m in report.zeros:
        print(f"# zero: u = {u:.12g} (multiplicity {m})", file=sys.stderr)
    print(f"# bound: {report.bound}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
