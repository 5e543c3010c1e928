"""Acceptance gate: the nine top-level criteria, one pass/fail line each.

Each criterion records a [PASS]/[FAIL] line (printed in the terminal
summary section "acceptance criteria") before asserting, so a red run
still shows the complete scoreboard.
"""

import math
import random
import time
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE_LINES
from isochrone.analysis import bound_accounting, find_zeros, i_u_form, phi_bound, zero_bound
from isochrone.dynamics import (
    IntegrationOptions,
    State,
    detect_limit_cycles,
    displacement,
    first_integral,
    return_map,
)
from isochrone.elliptic import (
    UForm,
    eval_generator,
    eval_I_h,
    h_from_u,
    pf_derivative,
)
from isochrone.analysis import eval_I_u
from isochrone.exactpoly import GeneratorIndex, RationalPoly
from isochrone.perturbation import PerturbationSpec
from isochrone.presets import example_spec
from isochrone.quadrature import quad_Iij
from isochrone.reduction import degree_profile, reduce_k1, reduce_k3

F = Fraction
OPTS = IntegrationOptions(rel_tol=1e-11, abs_tol=1e-13, max_time=60.0)
# detection only needs displacement signs resolved (magnitudes ~1e-5 at
# eps=1e-3); a looser integrator tolerance keeps criterion 9 well inside
# its runtime budget even on a loaded machine
OPTS_DETECT = IntegrationOptions(rel_tol=1e-9, abs_tol=1e-11, max_time=60.0)


def record(num, title, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    ACCEPTANCE_LINES.append(f"[{tag}] criterion {num}: {title}{suffix}")
    assert ok, f"criterion {num} failed: {title}{suffix}"


def test_criterion_1_exact_identities():
    t0 = time.time()
    ok = True
    # third-power expansions, exact rationals
    d2 = {(g.i, g.j): p for g, p in reduce_k3(2).terms}
    ok &= d2[(1, 3)] == RationalPoly.constant(2)
    ok &= d2[(0, 3)] == RationalPoly.constant(F(-3, 4))
    ok &= d2[(2, 1)] == RationalPoly.linear(3, F(9, 16))
    ok &= d2[(0, 1)] == RationalPoly.constant(F(-3, 16))
    ok &= d2[(1, 1)] == RationalPoly.constant(F(3, 16))
    ok &= d2[(3, 1)] == RationalPoly.constant(F(3, 16))
    d3 = {(g.i, g.j): p for g, p in reduce_k3(3).terms}
    ok &= d3[(1, 3)] == RationalPoly.constant(3)
    ok &= d3[(0, 3)] == RationalPoly.constant(F(-27, 20))
    ok &= d3[(3, 1)] == RationalPoly.linear(F(12, 5), F(63, 80))
    ok &= d3[(2, 1)] == RationalPoly.linear(F(27, 5), F(93, 80))
    ok &= d3[(0, 1)] == RationalPoly.constant(F(-27, 80))
    ok &= d3[(1, 1)] == RationalPoly.constant(F(3, 16))
    ok &= d3[(4, 1)] == RationalPoly.constant(F(3, 20))
    # first-power cubic identity
    c = reduce_k1(3)
    ok &= c.p01 == RationalPoly.constant(-1)
    ok &= c.p11 == RationalPoly.constant(-1)
    ok &= c.p21 == RationalPoly.constant(-1)
    ok &= c.p03 == RationalPoly.constant(F(-4, 3))
    elapsed = time.time() - t0
    ok &= elapsed < 1.0
    record(1, "exact identity suite", ok, f"{elapsed:.2f}s")


def test_criterion_2_cancellation_and_degrees():
    t0 = time.time()
    ok = True
    for k in range(3, 26):
        c = reduce_k1(k)  # raises if extended generators fail to cancel
        dp = degree_profile(c)
        cap_a, cap_s = (k - 3) // 2, (k - 2) // 2
        ok &= dp[0] <= cap_a and dp[1] <= cap_a and dp[3] <= cap_a
        ok &= dp[2] <= cap_s
    elapsed = time.time() - t0
    ok &= elapsed < 5.0
    record(2, "cancellation and degree bounds k=3..25", ok, f"{elapsed:.2f}s")


def test_criterion_3_closed_form_vs_oracle():
    t0 = time.time()
    worst = 0.0
    for h in (0.1, 4.0 / 9.0, 1.0, 5.0):
        for ij in ((0, 1), (1, 1), (2, 1), (3, 1), (0, 3)):
            c = eval_generator(GeneratorIndex(*ij), h)
            q = quad_Iij(*ij, h)
            worst = max(worst, abs(c - q) / abs(q))
    ok = worst <= 1e-6
    # calibration: the quadrature itself pins I_{0,1} = -4*pi*h
    for h in (0.1, 4.0 / 9.0, 1.0, 5.0):
        q = quad_Iij(0, 1, h)
        ok &= abs(q + 4.0 * math.pi * h) <= 1e-8 * abs(4.0 * math.pi * h)
    elapsed = time.time() - t0
    ok &= elapsed < 30.0
    record(3, "closed forms vs quadrature oracle", ok,
           f"worst rel {worst:.2e}, {elapsed:.1f}s")


def test_criterion_4_reduction_vs_oracle():
    rng = random.Random(41)
    worst = 0.0
    basis = {(0, 1), (1, 1), (2, 1), (3, 1), (0, 3)}
    for _ in range(20):
        j = rng.choice([1, 3])
        i = rng.randint(3 if j == 1 else 2, 12)
        h = rng.uniform(0.1, 5.0)
        if j == 1:
            val = eval_I_h(reduce_k1(i), h)
        else:
            # third-power reductions stay supported on I13/I03 plus
            # first powers; evaluate each term by its own certified route
            val = 0.0
            for g, poly in reduce_k3(i).terms:
                if (g.i, g.j) in basis:
                    gen = eval_generator(GeneratorIndex(g.i, g.j), h)
                elif g.j == 1:
                    gen = eval_I_h(reduce_k1(g.i), h)
                else:
                    gen = quad_Iij(g.i, g.j, h)
                val += float(poly(F(h))) * gen
        oracle = quad_Iij(i, j, h)
        worst = max(worst, abs(val - oracle) / (1.0 + abs(oracle)))
    ok = worst <= 1e-6
    record(4, "reduction vs oracle (20 random indices)", ok,
           f"worst rel {worst:.2e}")


def test_criterion_5_example_zeros():
    t0 = time.time()
    z1 = find_zeros(example_spec("1"))
    z2 = find_zeros(example_spec("2"))
    spec3 = example_spec("3")
    z3 = find_zeros(spec3)
    ok = (
        len(z1.zeros) == 1
        and z1.zeros[0][1] == 1
        and abs(z1.zeros[0][0] - math.sqrt(5.0) / 5.0) <= 1e-8
    )
    ok &= (
        len(z2.zeros) == 1
        and z2.zeros[0][1] == 1
        and abs(z2.zeros[0][0] - 0.5) <= 1e-8
    )
    ok &= (
        len(z3.zeros) == 1
        and z3.zeros[0][1] == 2
        and abs(z3.zeros[0][0] - 1.0 / 3.0) <= 1e-8
    )
    detail = ""
    if ok:
        u3 = z3.zeros[0][0]
        uf = i_u_form(spec3)
        d1 = pf_derivative(uf, 1)
        d2 = pf_derivative(uf, 2)
        # local scale of I near the tangency (half-width 0.05 window)
        local = max(abs(uf(u3 - 0.05)), abs(uf(u3 + 0.05)))
        ok &= abs(uf(u3)) <= 1e-9
        ok &= abs(d1(u3)) <= 1e-9
        ok &= abs(d2(u3)) >= 0.1 * local / 0.05**2
        detail = f"|I''|={abs(d2(u3)):.3g}"
    elapsed = time.time() - t0
    ok &= elapsed < 10.0
    record(5, "example zeros sqrt(5)/5, 1/2, 1/3-double", ok,
           f"{detail} {elapsed:.1f}s".strip())


def test_criterion_6_bound_arithmetic():
    ok = zero_bound(3) == 65 and zero_bound(5) == 109 and zero_bound(4) == 94
    acc3 = bound_accounting(3)
    acc5 = bound_accounting(5)
    # intermediate accounting: phi_bound on the post-derivative degrees
    # reproduces 8*floor((n-3)/2) + 32*floor((n-2)/2) + 59 (= 59 at n=3,
    # 99 at n=5) and Rolle steps close the gap to 22n-1
    for n, acc in ((3, acc3), (5, acc5)):
        expected = 8 * ((n - 3) // 2) + 32 * ((n - 2) // 2) + 59
        ok &= phi_bound(acc.deg_Q_deriv, acc.deg_R_deriv) == expected
        ok &= acc.pre_rolle_bound == expected
        ok &= acc.bound == expected + acc.rolle_steps == 22 * n - 1
    ok &= phi_bound(2, 3) == 6 and phi_bound(0, 0) == 1
    record(6, "zero-count bound arithmetic", ok)


def test_criterion_7_picard_fuchs():
    Kf = UForm.make(Q=(1.0,))
    Ef = UForm.make(R=(1.0,))
    uf = i_u_form(example_spec("3"))
    worst = 0.0
    du = 1e-6
    for f in (Kf, Ef, uf):
        d1 = pf_derivative(f, 1)
        for u in (0.2, 0.5, 0.8):
            fd = (f(u + du) - f(u - du)) / (2.0 * du)
            worst = max(worst, abs(d1(u) - fd) / (1.0 + abs(fd)))
    ok = worst <= 1e-6
    record(7, "Picard-Fuchs derivatives vs finite differences", ok,
           f"worst rel {worst:.2e}")


def test_criterion_8_unperturbed_dynamics():
    free = PerturbationSpec.from_coeffs([0.0])
    worst_h, worst_t = 0.0, 0.0
    for x0 in (-0.2, -0.447, -0.7):
        x1, t1 = return_map(x0, free, OPTS)
        h0 = first_integral(State(x0, 0.0))
        h1 = first_integral(State(x1, 0.0))
        worst_h = max(worst_h, abs(h1 - h0) / h0)
        worst_t = max(worst_t, abs(t1 - 2.0 * math.pi) / (2.0 * math.pi))
    ok = worst_h <= 1e-9 and worst_t <= 1e-7
    record(8, "conservation and isochronicity at eps=0", ok,
           f"dH {worst_h:.2e}, dT {worst_t:.2e}")


def test_criterion_9_limit_cycle_confirmation():
    t0 = time.time()
    eps = 1e-3
    ok = True
    details = []
    for name, u_star in (("1", math.sqrt(5.0) / 5.0), ("2", 0.5)):
        spec = example_spec(name, eps=eps)
        cycles = detect_limit_cycles(
            spec, search=(0.12, 0.95, 17), opts=OPTS_DETECT, refine_tol=3e-6
        )
        ok &= len(cycles) == 1
        if cycles:
            target = h_from_u(u_star)
            dev = abs(cycles[0].h_level - target) / target
            ok &= dev <= 0.05
            details.append(f"ex{name}: h dev {dev:.1%}")
    spec3b = example_spec("3b", eps=eps)
    cycles3b = detect_limit_cycles(
        spec3b, search=(0.12, 0.95, 17), opts=OPTS_DETECT, refine_tol=3e-6
    )
    ok &= len(cycles3b) == 2
    details.append(f"ex3b: {len(cycles3b)} cycles")
    # displacement sign correlates with sign(I) via one global sigma
    spec1 = example_spec("1", eps=eps)
    sigmas = set()
    for u in (0.25, 0.35, 0.55, 0.8):
        d = displacement(-u, spec1, OPTS_DETECT)
        sig = math.copysign(1.0, d) * math.copysign(1.0, eps * eval_I_u(spec1, u))
        sigmas.add(sig)
    ok &= len(sigmas) == 1
    elapsed = time.time() - t0
    ok &= elapsed < 120.0
    record(9, "limit-cycle confirmation at eps=1e-3", ok,
           f"{'; '.join(details)}; {elapsed:.0f}s")
