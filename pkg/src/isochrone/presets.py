"""Bundled example perturbations with closed-form coefficients.

Each example fixes the coefficients a_i in terms of complete elliptic
integrals K, E evaluated at a specific modulus so that the reduced
integral I(u) has prescribed zeros in (0,1):

- example "1"  (n=1): one simple zero at u = sqrt(5)/5;
- example "2"  (n=2): one simple zero at u = 1/2;
- example "3"  (n=3): one double zero at u = 1/3;
- example "3b" (n=3): example 3 with the constant -1 removed from a_0,
  which splits the tangency into two simple zeros bracketing 1/3.

K and E are computed at run time by the AGM routine rather than being
embedded as truncated decimals, so the zero locations hold to full
working precision.
"""

from __future__ import annotations

import math

from .elliptic import agm_KE
from .errors import DomainError
from .perturbation import PerturbationSpec

EXAMPLE_NAMES = ("1", "2", "3", "3b")

# modulus of the elliptic integrals entering each coefficient set
EXAMPLE_MODULUS = {
    "1": 2.0 * math.sqrt(6.0) / 5.0,
    "2": math.sqrt(15.0) / 4.0,
    "3": 4.0 * math.sqrt(5.0) / 9.0,
    "3b": 4.0 * math.sqrt(5.0) / 9.0,
}

# designed zero structure: (location, multiplicity); None = derived pair
EXAMPLE_TARGET = {
    "1": ((math.sqrt(5.0) / 5.0, 1),),
    "2": ((0.5, 1),),
    "3": ((1.0 / 3.0, 2),),
    "3b": None,  # two simple zeros bracketing 1/3; locations not closed-form
}


def example_coeffs(name: str) -> tuple[float, ...]:
    """Coefficient tuple (a_0, ..., a_n) of the named example."""
    if name not in EXAMPLE_NAMES:
        raise DomainError(
            f"unknown example {name!r}; available: {', '.join(EXAMPLE_NAMES)}"
        )
    pair = agm_KE(EXAMPLE_MODULUS[name])
    K, E = pair.K, pair.E
    if name == "1":
        return (13.0 * K - 25.0 * E, 2.0 * math.sqrt(5.0) * math.pi)
    if name == "2":
        return (0.5 * E, -9.0 * math.pi / 128.0, -17.0 * K / 64.0)
    # examples 3 / 3b share everything except the constant part of a_0
    a0 = (24.0 * K * K + 1968.0 * K * E - 5832.0 * E * E) / (6.0 * math.pi)
    if name == "3":
        a0 -= 1.0
    return (a0, 6.0 * K + 42.0 * E, 1.0, 50.0 * K - 162.0 * E)


def example_spec(name: str, eps: float = 0.0) -> PerturbationSpec:
    """PerturbationSpec for the named example."""
    return PerturbationSpec.from_coeffs(example_coeffs(name), eps=eps)
