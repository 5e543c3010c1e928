"""Zero location and counting for the reduced integral I(u) on (0,1).

The integral is assembled exactly over the generator basis, converted to
its u-form (polynomials times K, E), and scanned on a dense grid for
sign changes.  Simple zeros are refined by bracketed root finding on
I(u); double zeros are certified through the Picard-Fuchs derivatives:
a zero of I' where |I| is below the noise floor and |I''| is bounded
away from zero.  The module also records the zero-count bound and its
intermediate degree accounting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .elliptic import UForm, h_from_u, pf_derivative, to_u_form
from .errors import DomainError
from .perturbation import PerturbationSpec
from .reduction import assemble_I

DEFAULT_GRID = 2000
DEFAULT_DELTA = 1e-4
DEFAULT_TOL = 1e-10
# relative noise floor for "identically zero" detection
IDENTICALLY_ZERO_FLOOR = 1e-13


def i_u_form(spec: PerturbationSpec) -> UForm:
    """u-form of the reduced integral I(u) for the given perturbation."""
    return to_u_form(assemble_I(spec))


def eval_I_u(spec: PerturbationSpec, u) -> float:
    """Evaluate the reduced integral at parameter u in (0,1)."""
    u_arr = np.asarray(u, dtype=float)
    if np.any((u_arr <= 0.0) | (u_arr >= 1.0)):
        raise DomainError(f"u must lie in (0,1), got {u}")
    return i_u_form(spec)(u)


@dataclass(frozen=True)
class ZeroReport:
    """Certified zeros of I(u) in (0,1) with the applicable count bound."""

    zeros: tuple[tuple[float, int], ...]
    bound: int
    identically_zero: bool
    grid: int
    tol: float
    delta: float
    diagnostics: dict = field(default_factory=dict)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.zeros)

    def to_json(self) -> dict:
        return {
            "zeros": [{"u": f"{u:.17g}", "multiplicity": m} for u, m in self.zeros],
            "bound": self.bound,
            "identically_zero": self.identically_zero,
            "grid": self.grid,
            "tol": f"{self.tol:.17g}",
            "delta": f"{self.delta:.17g}",
            "diagnostics": {k: f"{v:.17g}" if isinstance(v, float) else v
                            for k, v in sorted(self.diagnostics.items())},
        }


def _refine_bracket(f, lo: float, hi: float, tol: float) -> float:
    # refine well past the requested tolerance (cheap, a few extra
    # bisection steps) so derivative certificates at the root are tight
    xtol = min(tol, 1e-14)
    return float(brentq(f, lo, hi, xtol=xtol, rtol=8.0 * np.finfo(float).eps))


def find_zeros(
    spec: PerturbationSpec,
    grid: int = DEFAULT_GRID,
    tol: float = DEFAULT_TOL,
    delta: float = DEFAULT_DELTA,
) -> ZeroReport:
    """Locate and certify the zeros of I(u) on [delta, 1-delta].

    Sign changes of I give simple zeros.  Zeros of the Picard-Fuchs
    derivative I' at which |I| is below the certification threshold and
    |I''| is bounded away from zero are reported as double zeros.
    """
    if grid < 100:
        raise DomainError(f"grid must be at least 100, got {grid}")
    if tol <= 0:
        raise DomainError(f"tol must be positive, got {tol}")
    if not 0.0 < delta < 0.5:
        raise DomainError(f"delta must lie in (0, 0.5), got {delta}")

    uf = i_u_form(spec)
    d1 = pf_derivative(uf, 1)
    d2 = pf_derivative(uf, 2)

    us = np.linspace(delta, 1.0 - delta, grid)
    vals = uf(us)
    scale = float(np.max(np.abs(vals)))
    coeff_scale = max(abs(c) for c in spec.a)
    diagnostics = {"max_abs_I": scale, "coeff_scale": coeff_scale}

    bound = zero_bound(max(spec.n, 1))
    if scale < IDENTICALLY_ZERO_FLOOR * (1.0 + coeff_scale):
        return ZeroReport(
            zeros=(),
            bound=bound,
            identically_zero=True,
            grid=grid,
            tol=tol,
            delta=delta,
            diagnostics=diagnostics,
        )

    # simple zeros: sign changes of I
    simple: list[float] = []
    signs = np.sign(vals)
    for idx in np.nonzero(signs[:-1] * signs[1:] < 0)[0]:
        simple.append(_refine_bracket(uf, us[idx], us[idx + 1], tol))

    # double zeros: sign changes of I' where I itself sits at the noise floor;
    # thresholds are local because I(u) grows like u^{-2} toward the center
    deriv_vals = d1(us)
    dsigns = np.sign(deriv_vals)
    window = 0.05
    doubles: list[float] = []
    for idx in np.nonzero(dsigns[:-1] * dsigns[1:] < 0)[0]:
        u_crit = _refine_bracket(d1, us[idx], us[idx + 1], tol)
        near = np.abs(us - u_crit) <= window
        local = float(np.max(np.abs(vals[near])))
        if local == 0.0 or abs(uf(u_crit)) > 1e-7 * local:
            continue  # ordinary extremum, not a tangency
        curvature = abs(d2(u_crit))
        if curvature < 0.1 * local / window**2:
            continue  # cannot certify multiplicity exactly two
        doubles.append(u_crit)
        diagnostics[f"curvature_at_{u_crit:.6f}"] = curvature

    # a numerically split tangency may surface both as a double zero and as
    # a tight pair of sign changes; the certified double wins
    merged: list[tuple[float, int]] = [(u, 2) for u in doubles]
    for u in simple:
        if all(abs(u - ud) > 1e-6 for ud in doubles):
            merged.append((u, 1))
    merged.sort(key=lambda t: t[0])

    return ZeroReport(
        zeros=tuple(merged),
        bound=bound,
        identically_zero=False,
        grid=grid,
        tol=tol,
        delta=delta,
        diagnostics=diagnostics,
    )


# ---------------------------------------------------------------------------
# zero-count bound bookkeeping


def phi_bound(deg_phi: int, deg_psi: int) -> int:
    """Zero bound deg_phi + deg_psi + 1 for phi*K + psi*E on (0,1)."""
    return int(deg_phi) + int(deg_psi) + 1


@dataclass(frozen=True)
class BoundAccounting:
    """Intermediate degree bookkeeping behind the zero-count bound.

    For odd n >= 3 the reduced integral is cleared to the form
    P + Q*K + R*E (degrees below), differentiated `rolle_steps` times
    to remove P, bounded via phi_bound, and Rolle's theorem adds one
    potential zero back per derivative.  For even n >= 4 and for
    n in {1,2} only the uniform bound 22n+6 is recorded (`sharp` False).
    """

    n: int
    bound: int
    sharp: bool
    rolle_steps: int
    deg_P: int | None = None
    deg_Q: int | None = None
    deg_R: int | None = None
    deg_Q_deriv: int | None = None
    deg_R_deriv: int | None = None
    pre_rolle_bound: int | None = None

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "bound": self.bound,
            "sharp": self.sharp,
            "rolle_steps": self.rolle_steps,
            "deg_P": self.deg_P,
            "deg_Q": self.deg_Q,
            "deg_R": self.deg_R,
            "deg_Q_deriv": self.deg_Q_deriv,
            "deg_R_deriv": self.deg_R_deriv,
            "pre_rolle_bound": self.pre_rolle_bound,
        }


def bound_accounting(n: int) -> BoundAccounting:
    """Zero-count bound for degree n together with its audit trail."""
    if n < 1:
        raise DomainError(f"perturbation degree must be >= 1, got {n}")
    rolle = 4 * ((n - 2) // 2) + 6 if n >= 2 else 6
    if n >= 3 and n % 2 == 1:
        f32 = (n - 3) // 2
        f22 = (n - 2) // 2
        deg_P = 4 * f22 + 5
        deg_Q = 4 * f32 + 6
        deg_R = 4 * f32 + 4
        deg_Qd = 4 * f32 + 16 * f22 + 30
        deg_Rd = 4 * f32 + 16 * f22 + 28
        pre = phi_bound(deg_Qd, deg_Rd)  # = 8*f32 + 32*f22 + 59
        bound = pre + rolle  # = 22n - 1
        return BoundAccounting(
            n=n,
            bound=bound,
            sharp=True,
            rolle_steps=rolle,
            deg_P=deg_P,
            deg_Q=deg_Q,
            deg_R=deg_R,
            deg_Q_deriv=deg_Qd,
            deg_R_deriv=deg_Rd,
            pre_rolle_bound=pre,
        )
    # even n >= 4: same method asserted but degrees not re-derived here;
    # n in {1,2}: only the uniform bound is available
    return BoundAccounting(n=n, bound=22 * n + 6, sharp=False, rolle_steps=rolle)


def zero_bound(n: int) -> int:
    """Upper bound for the number of zeros of I(u) in (0,1)."""
    return bound_accounting(n).bound
