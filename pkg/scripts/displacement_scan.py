#!/usr/bin/env python3
"""Scan the Poincare displacement d(-u) of a perturbed system over u and
write CSV, optionally following up with full limit-cycle detection.

Example:
    python scripts/displacement_scan.py --example 3b --eps 1e-3 --detect
"""

import argparse
import sys

import numpy as np

from isochrone.dynamics import (
    IntegrationOptions,
    detect_limit_cycles,
    displacement,
)
from isochrone.perturbation import PerturbationSpec
from isochrone.presets import EXAMPLE_NAMES, example_spec


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--coeffs", help="comma-separated a_0,...,a_n")
    ap.add_argument("--example", choices=EXAMPLE_NAMES)
    ap.add_argument("--eps", type=float, required=True)
    ap.add_argument("--u-min", type=float, default=0.12)
    ap.add_argument("--u-max", type=float, default=0.95)
    ap.add_argument("--grid", type=int, default=30)
    ap.add_argument("--tol", type=float, default=1e-10)
    ap.add_argument("--detect", action="store_true",
                    help="refine sign changes into cycle records")
    ap.add_argument("--out", default="-", help="CSV path, '-' for stdout")
    args = ap.parse_args()

    if args.example:
        spec = example_spec(args.example, eps=args.eps)
    elif args.coeffs:
        spec = PerturbationSpec.from_coeffs(
            [float(c) for c in args.coeffs.split(",")], eps=args.eps
        )
    else:
        ap.error("one of --coeffs / --example is required")

    opts = IntegrationOptions(rel_tol=args.tol, abs_tol=args.tol * 1e-2)
    us = np.linspace(args.u_min, args.u_max, args.grid)
    lines = ["u,displacement"]
    for u in us:
        d = displacement(-u, spec, opts)
        lines.append(f"{u:.17g},{d:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)

    if args.detect:
        cycles = detect_limit_cycles(
            spec, search=(args.u_min, args.u_max, args.grid), opts=opts
        )
        for c in cycles:
            print(
                f"# cycle: x0 = {c.x0:.10g}, h = {c.h_level:.10g}, "
                f"period = {c.period:.10g}",
                file=sys.stderr,
            )
        print(f"# total cycles: {len(cycles)}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
