"""Direct simulation of the perturbed system and limit-cycle detection.

The system

    x' = x*y - x^2*y
    y' = y^2 + (x^3 + x^2 + x + 1)/4 + eps*f(x)*y

has an isochronous center at (-1, 0) (period 2*pi for every surrounding
orbit at eps = 0) and invariant lines x = 0 and x = 1.  Orbits are
tracked with an adaptive high-order explicit integrator; the Poincare
section is Sigma = {y = 0, -1 < x < 0}, crossed upward exactly once per
revolution, which gives a well-defined return map and displacement
function whose sign changes locate limit cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError
from .perturbation import PerturbationSpec

# escape guard: the annulus lives in x < 0; approaching the invariant
# line x = 0 (or leaving via unbounded y) means the orbit left the annulus
ESCAPE_X = -1e-8
ESCAPE_Y = 1e6


@dataclass(frozen=True)
class State:
    x: float
    y: float
    t: float = 0.0


@dataclass(frozen=True)
class IntegrationOptions:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_time: float = 200.0


@dataclass(frozen=True)
class OrbitResult:
    """Trajectory with section-crossing events.

    status is "event" when the requested number of upward y=0 crossings
    was found, "timeout" when max_time ran out first, and "escape" when
    the orbit approached an invariant line or blew up.
    """

    status: str
    times: np.ndarray
    states: np.ndarray  # shape (2, len(times))
    event_times: tuple[float, ...]
    event_states: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class CycleRecord:
    """A detected limit cycle, recorded by its section coordinate."""

    x0: float
    period: float
    h_level: float
    bracket: tuple[float, float]
    eps: float

    def to_json(self) -> dict:
        return {
            "x0": f"{self.x0:.17g}",
            "period": f"{self.period:.17g}",
            "h_level": f"{self.h_level:.17g}",
            "bracket": [f"{self.bracket[0]:.17g}", f"{self.bracket[1]:.17g}"],
            "eps": f"{self.eps:.17g}",
        }


def vector_field(s: State, spec: PerturbationSpec) -> tuple[float, float]:
    """Right-hand side (dx, dy) at the given state."""
    x, y = s.x, s.y
    dx = x * y - x * x * y
    dy = y * y + 0.25 * (x**3 + x**2 + x + 1.0) + spec.eps * spec.f(x) * y
    return dx, dy


def first_integral(s: State) -> float:
    """Conserved quantity H of the unperturbed flow; undefined on x = 0."""
    x, y = s.x, s.y
    if x == 0.0:
        raise DomainError("first integral is undefined on the invariant line x=0")
    return (x - 1.0) ** 2 * (x * x + 2.0 * x + 1.0 + 4.0 * y * y) / (16.0 * x * x)


def _rhs(spec: PerturbationSpec):
    a = spec.a
    eps = spec.eps

    def rhs(t, z):
        x, y = z
        f = 0.0
        for c in reversed(a):
            f = f * x + c
        return (x * y - x * x * y,
                y * y + 0.25 * (x**3 + x**2 + x + 1.0) + eps * f * y)

    return rhs


def integrate_orbit(
    s0: State,
    spec: PerturbationSpec,
    opts: IntegrationOptions = IntegrationOptions(),
    crossings: int = 1,
) -> OrbitResult:
    """Integrate from s0 until `crossings` upward y=0 section crossings.

    A crossing at the starting instant (orbits launched on the section)
    is not counted; events are located on the dense output by the
    integrator's root finder.
    """
    if crossings < 1:
        raise DomainError(f"crossings must be >= 1, got {crossings}")

    def section(t, z):
        return z[1]

    section.direction = 1.0
    section.terminal = False

    def escape(t, z):
        return min(ESCAPE_X - z[0], ESCAPE_Y - abs(z[1]))

    escape.terminal = True

    sol = solve_ivp(
        _rhs(spec),
        (s0.t, s0.t + opts.max_time),
        (s0.x, s0.y),
        method="DOP853",
        rtol=opts.rel_tol,
        atol=opts.abs_tol,
        events=(section, escape),
        dense_output=False,
    )
    # skip a spurious event at launch when s0 already lies on the section
    hits = [
        (float(te), (float(ze[0]), float(ze[1])))
        for te, ze in zip(sol.t_events[0], sol.y_events[0])
        if te > s0.t + 1e-6
    ]
    if len(sol.t_events[1]):
        status = "escape"
    elif len(hits) >= crossings:
        status = "event"
        hits = hits[:crossings]
    else:
        status = "timeout"
    return OrbitResult(
        status=status,
        times=sol.t,
        states=sol.y,
        event_times=tuple(t for t, _ in hits),
        event_states=tuple(z for _, z in hits),
    )


def return_map(
    x0: float,
    spec: PerturbationSpec,
    opts: IntegrationOptions = IntegrationOptions(),
) -> tuple[float, float]:
    """Poincare map on Sigma = {y=0, -1<x<0}: (next crossing x, return time)."""
    if not -1.0 < x0 < 0.0:
        raise DomainError(f"section coordinate must lie in (-1, 0), got {x0}")
    res = integrate_orbit(State(x0, 0.0), spec, opts, crossings=1)
    if res.status != "event":
        raise DomainError(
            f"return map unresolved from x0={x0}: integration ended with "
            f"status {res.status!r}"
        )
    (t1,), ((x1, _y1),) = res.event_times, res.event_states
    return x1, t1


def displacement(
    x0: float,
    spec: PerturbationSpec,
    opts: IntegrationOptions = IntegrationOptions(),
) -> float:
    """Displacement d(x0) = P(x0) - x0 of the return map."""
    return return_map(x0, spec, opts)[0] - x0


def detect_limit_cycles(
    spec: PerturbationSpec,
    search: tuple[float, float, int] = (0.12, 0.95, 30),
    opts: IntegrationOptions = IntegrationOptions(),
    refine_tol: float = 1e-9,
) -> list[CycleRecord]:
    """Bracket and refine sign changes of the displacement over x0 = -u.

    Returns one CycleRecord per sign change; an empty list is a valid
    outcome (no cycles in the searched band).
    """
    if spec.eps == 0.0:
        raise DomainError("limit-cycle detection requires eps != 0")
    u_min, u_max, grid = search
    if not (0.0 < u_min < u_max < 1.0):
        raise DomainError(f"need 0 < u_min < u_max < 1, got {search}")
    if grid < 2:
        raise DomainError(f"grid must be >= 2, got {grid}")

    us = np.linspace(u_min, u_max, int(grid))
    ds = np.array([displacement(-u, spec, opts) for u in us])
    cycles: list[CycleRecord] = []
    for idx in np.nonzero(np.sign(ds[:-1]) * np.sign(ds[1:]) < 0)[0]:
        lo, hi = -us[idx], -us[idx + 1]  # x-coordinates; lo > hi
        d_lo = ds[idx]
        bracket = (min(lo, hi), max(lo, hi))
        # bisection on the section coordinate
        while abs(hi - lo) > refine_tol:
            mid = 0.5 * (lo + hi)
            d_mid = displacement(mid, spec, opts)
            if d_mid == 0.0:
                lo = hi = mid
                break
            if (d_mid > 0) == (d_lo > 0):
                lo, d_lo = mid, d_mid
            else:
                hi = mid
        x_star = 0.5 * (lo + hi)
        _, period = return_map(x_star, spec, opts)
        cycles.append(
            CycleRecord(
                x0=x_star,
                period=period,
                h_level=first_integral(State(x_star, 0.0)),
                bracket=bracket,
                eps=spec.eps,
            )
        )
    cycles.sort(key=lambda c: c.x0)
    return cycles
