"""Command-line entry point.

Subcommands: reduce, oracle, eval, zeros, bound, simulate, verify.
All JSON output uses fixed field ordering and 17-significant-digit
floats so identical invocations produce byte-identical artifacts.
Exit codes: 0 success, 2 usage error, 3 domain error, 4 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

from .analysis import bound_accounting, eval_I_u, find_zeros, i_u_form
from .dynamics import (
    IntegrationOptions,
    State,
    detect_limit_cycles,
    first_integral,
    integrate_orbit,
)
from .elliptic import eval_I_h, h_from_u, pf_derivative, to_u_form
from .errors import DomainError, InternalConsistencyError
from .exactpoly import GeneratorIndex
from .perturbation import PerturbationSpec
from .presets import EXAMPLE_NAMES, example_spec
from .quadrature import quad_Iij_with_error
from .reduction import assemble_I, reduce_k1, reduce_k3

FLOAT_FMT = "{:.17g}"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ISOCHRONE_THREADS", "1")))
    except ValueError:
        return 1


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _spec_from_args(args, eps: float = 0.0) -> PerturbationSpec:
    if getattr(args, "example", None):
        return example_spec(args.example, eps=eps)
    if getattr(args, "coeffs", None):
        coeffs = [float(c) for c in args.coeffs.split(",")]
        return PerturbationSpec.from_coeffs(coeffs, eps=eps)
    raise DomainError("either --coeffs or --example is required")


def _cmd_reduce(args) -> int:
    if args.j == 1:
        combo = reduce_k1(args.i)
        payload = combo.to_json()
    elif args.j == 3:
        payload = {
            f"I{g.i}{g.j}": poly.to_json()
            for g, poly in reduce_k3(args.i).terms
        }
    else:
        raise DomainError(f"reduce supports j in {{1, 3}}, got {args.j}")
    _emit(_dump_json(payload), args.output)
    return 0


def _cmd_oracle(args) -> int:
    hs = [float(v) for v in args.h.split(",")]
    rows = ["i,j,h,value,err_estimate"]

    def work(h):
        val, err = quad_Iij_with_error(args.i, args.j, h)
        return h, val, err

    with ThreadPoolExecutor(max_workers=_threads()) as pool:
        for h, val, err in pool.map(work, hs):
            rows.append(
                f"{args.i},{args.j},{FLOAT_FMT.format(h)},"
                f"{FLOAT_FMT.format(val)},{FLOAT_FMT.format(err)}"
            )
    _emit("\n".join(rows) + "\n", args.output)
    return 0


def _cmd_eval(args) -> int:
    spec = _spec_from_args(args)
    if (args.h is None) == (args.u is None):
        raise DomainError("exactly one of --h or --u is required")
    if args.u is not None:
        val = eval_I_u(spec, args.u)
    else:
        val = eval_I_h(assemble_I(spec), args.h)
    _emit(FLOAT_FMT.format(val) + "\n", args.output)
    return 0


def _cmd_zeros(args) -> int:
    spec = _spec_from_args(args)
    report = find_zeros(spec, grid=args.grid, tol=args.tol, delta=args.delta)
    if args.samples:
        import numpy as np

        uf = i_u_form(spec)
        us = np.linspace(args.delta, 1.0 - args.delta, args.grid)
        lines = ["u,I"]
        for u, v in zip(us, uf(us)):
            lines.append(f"{FLOAT_FMT.format(u)},{FLOAT_FMT.format(v)}")
        with open(args.samples, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    _emit(_dump_json(report.to_json()), args.output)
    return 0


def _cmd_bound(args) -> int:
    acc = bound_accounting(args.n)
    _emit(_dump_json(acc.to_json()), args.output)
    return 0


def _cmd_simulate(args) -> int:
    spec = _spec_from_args(args, eps=args.eps)
    opts = IntegrationOptions(
        rel_tol=args.tol, abs_tol=args.tol * 1e-2, max_time=args.max_time
    )
    if args.detect:
        cycles = detect_limit_cycles(
            spec, search=(args.u_min, args.u_max, args.search_grid), opts=opts
        )
        payload = {"eps": FLOAT_FMT.format(args.eps),
                   "cycles": [c.to_json() for c in cycles]}
        _emit(_dump_json(payload), args.output)
        return 0
    if args.u0 is not None:
        x0 = -args.u0
    elif args.x0 is not None:
        x0 = args.x0
    else:
        raise DomainError("one of --u0, --x0 or --detect is required")
    res = integrate_orbit(State(x0, 0.0), spec, opts, crossings=args.crossings)
    if args.trajectory:
        lines = ["t,x,y,H"]
        for t, x, y in zip(res.times, res.states[0], res.states[1]):
            hval = first_integral(State(x, y)) if x != 0.0 else float("nan")
            lines.append(
                f"{FLOAT_FMT.format(t)},{FLOAT_FMT.format(x)},"
                f"{FLOAT_FMT.format(y)},{FLOAT_FMT.format(hval)}"
            )
        with open(args.trajectory, "w", encoding="utf-8") as fh:
            fh.write("\n".join(lines) + "\n")
    payload = {
        "status": res.status,
        "events": [
            {"t": FLOAT_FMT.format(t), "x": FLOAT_FMT.format(z[0]),
             "y": FLOAT_FMT.format(z[1])}
            for t, z in zip(res.event_times, res.event_states)
        ],
    }
    _emit(_dump_json(payload), args.output)
    return 0


def _cmd_verify(args) -> int:
    """Cross-validate reduction, closed forms, oracle and dynamics."""
    from .elliptic import eval_generator
    from .quadrature import quad_Iij

    checks: list[tuple[str, bool, str]] = []

    def record(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    # closed forms vs oracle
    worst = 0.0
    for h in (0.1, 4.0 / 9.0, 1.0, 5.0):
        for ij in ((0, 1), (1, 1), (2, 1), (3, 1), (0, 3)):
            c = eval_generator(GeneratorIndex(*ij), h)
            q = quad_Iij(*ij, h)
            worst = max(worst, abs(c - q) / (1.0 + abs(q)))
    record("closed-form vs oracle", worst < 1e-8, f"worst rel {worst:.3e}")

    # reduction vs oracle
    worst = 0.0
    for k in range(3, 10):
        combo = reduce_k1(k)
        for h in (0.2, 4.0 / 9.0, 2.0):
            v = eval_I_h(combo, h)
            q = quad_Iij(k, 1, h)
            worst = max(worst, abs(v - q) / (1.0 + abs(q)))
    record("reduction vs oracle", worst < 1e-8, f"worst rel {worst:.3e}")

    # u-form consistency
    spec = example_spec("1")
    worst = 0.0
    combo = assemble_I(spec)
    uf = to_u_form(combo)
    for u in (0.2, 0.45, 0.7, 0.9):
        a = uf(u)
        b = eval_I_h(combo, h_from_u(u))
        worst = max(worst, abs(a - b) / (1.0 + abs(b)))
    record("u-form vs h-form", worst < 1e-10, f"worst rel {worst:.3e}")

    # Picard-Fuchs derivative vs finite differences
    d1 = pf_derivative(uf, 1)
    du = 1e-6
    worst = 0.0
    for u in (0.3, 0.6):
        fd = (uf(u + du) - uf(u - du)) / (2.0 * du)
        worst = max(worst, abs(d1(u) - fd) / (1.0 + abs(fd)))
    record("Picard-Fuchs vs finite differences", worst < 1e-6,
           f"worst rel {worst:.3e}")

    # unperturbed dynamics: conservation and isochronicity
    from .dynamics import return_map

    worst_h, worst_t = 0.0, 0.0
    for x0 in (-0.3, -0.6):
        x1, t1 = return_map(x0, PerturbationSpec.from_coeffs([0.0]))
        h0 = first_integral(State(x0, 0.0))
        h1 = first_integral(State(x1, 0.0))
        worst_h = max(worst_h, abs(h1 - h0) / h0)
        worst_t = max(worst_t, abs(t1 - 2.0 * math.pi) / (2.0 * math.pi))
    record("H conservation at eps=0", worst_h < 1e-9, f"worst rel {worst_h:.3e}")
    record("isochronous period 2*pi", worst_t < 1e-7, f"worst rel {worst_t:.3e}")

    lines = []
    all_ok = True
    for name, ok, detail in checks:
        all_ok &= ok
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    lines.append("verify: " + ("all checks passed" if all_ok else "FAILURES above"))
    _emit("\n".join(lines) + "\n", args.output)
    if not all_ok:
        raise InternalConsistencyError("cross-validation failed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="isochrone",
        description="Reduction, evaluation, zero counting and direct "
        "simulation for the perturbed cubic isochronous system.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add_output(sp):
        sp.add_argument("--output", help="write to file instead of stdout")

    def add_spec(sp):
        sp.add_argument("--coeffs", help="comma-separated a_0,...,a_n")
        sp.add_argument("--example", choices=EXAMPLE_NAMES,
                        help="bundled example coefficient set")

    sp = sub.add_parser("reduce", help="reduce I_{i,j} to the generator basis")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, default=1)
    add_output(sp)
    sp.set_defaults(func=_cmd_reduce)

    sp = sub.add_parser("oracle", help="direct quadrature of I_{i,j}(h)")
    sp.add_argument("--i", type=int, required=True)
    sp.add_argument("--j", type=int, required=True)
    sp.add_argument("--h", required=True, help="level(s), comma-separated")
    add_output(sp)
    sp.set_defaults(func=_cmd_oracle)

    sp = sub.add_parser("eval", help="evaluate the reduced integral")
    add_spec(sp)
    sp.add_argument("--h", type=float)
    sp.add_argument("--u", type=float)
    add_output(sp)
    sp.set_defaults(func=_cmd_eval)

    sp = sub.add_parser("zeros", help="locate zeros of I(u) in (0,1)")
    add_spec(sp)
    sp.add_argument("--grid", type=int, default=2000)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--delta", type=float, default=1e-4)
    sp.add_argument("--samples", help="CSV path for (u, I(u)) samples")
    add_output(sp)
    sp.set_defaults(func=_cmd_zeros)

    sp = sub.add_parser("bound", help="zero-count bound with accounting")
    sp.add_argument("--n", type=int, required=True)
    add_output(sp)
    sp.set_defaults(func=_cmd_bound)

    sp = sub.add_parser("simulate", help="integrate orbits / detect cycles")
    add_spec(sp)
    sp.add_argument("--eps", type=float, required=True)
    sp.add_argument("--u0", type=float, help="start at (-u0, 0)")
    sp.add_argument("--x0", type=float, help="start at (x0, 0)")
    sp.add_argument("--crossings", type=int, default=1)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-time", type=float, default=200.0)
    sp.add_argument("--detect", action="store_true",
                    help="scan for limit cycles instead of one orbit")
    sp.add_argument("--u-min", type=float, default=0.12)
    sp.add_argument("--u-max", type=float, default=0.95)
    sp.add_argument("--search-grid", type=int, default=30)
    sp.add_argument("--trajectory", help="CSV path for t,x,y,H samples")
    add_output(sp)
    sp.set_defaults(func=_cmd_simulate)

    sp = sub.add_parser("verify", help="run the cross-validation suite")
    add_output(sp)
    sp.set_defaults(func=_cmd_verify)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except InternalConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
