"""Complete elliptic integrals, parameter maps and closed generator forms.

K and E are computed by arithmetic-geometric-mean iteration (quadratically
convergent, machine precision).  The energy level h maps to the bounded
parameter u in (0,1) via u^2 = 8h+1-4*sqrt(4h^2+h), with modulus
k = sqrt(1-u^4) and inverse h = (1-u^2)^2/(16u^2).  Each generator has a
closed form of the shape u^{-d}[P(u) + Q(u)K + R(u)E], and that class is
closed under differentiation (up to powers of 1-u^4), which is what the
UForm container tracks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError
from .exactpoly import GeneratorIndex
from .reduction import BasisCombo

# below this level the closed forms lose digits to cancellation (the
# integrals all scale like h near the center); switch to leading order
H_SMALL = 1e-6


@dataclass(frozen=True)
class EllipticPair:
    K: float
    E: float
    k: float


def _agm_KE(k):
    """Vectorized K(k), E(k) by AGM; k may be a scalar or ndarray in [0,1)."""
    k = np.asarray(k, dtype=float)
    if np.any((k < 0) | (k >= 1)):
        raise DomainError("modulus must satisfy 0 <= k < 1 (K diverges at k=1)")
    a = np.ones_like(k)
    b = np.sqrt(1.0 - k * k)
    c = k.copy()
    csum = 0.5 * c * c  # sum of 2^(n-1) c_n^2, n = 0 term
    pow2 = 1.0
    for _ in range(60):  # quadratic convergence; stalls only at roundoff
        if np.max(np.abs(c)) <= 1e-16 * np.max(a):
            break
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        pow2 *= 2.0
        csum = csum + 0.5 * pow2 * c * c
    K = np.pi / (2.0 * a)
    E = K * (1.0 - csum)
    return K, E


def agm_KE(k: float) -> EllipticPair:
    """Complete elliptic integrals of the first and second kind."""
    K, E = _agm_KE(float(k))
    return EllipticPair(float(K), float(E), float(k))


@dataclass(frozen=True)
class CurveParams:
    """Level h with its u-parameter, modulus and reciprocal pair a=1/u, b=u."""

    h: float
    u: float
    k: float
    a: float
    b: float


def modulus_from_h(h: float) -> float:
    """Modulus directly in terms of h (the closed-form variant)."""
    s = math.sqrt(4.0 * h * h + h)
    return 2.0 * math.sqrt(2.0) * math.sqrt(s / (8.0 * h + 1.0 + 4.0 * s))


def params_from_h(h: float) -> CurveParams:
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    s = math.sqrt(4.0 * h * h + h)
    # 8h+1-4s and 8h+1+4s multiply to 1; use the stable large root
    inv_u2 = 8.0 * h + 1.0 + 4.0 * s
    u = 1.0 / math.sqrt(inv_u2)
    k = math.sqrt(max(0.0, 1.0 - u**4))
    return CurveParams(h=h, u=u, k=k, a=1.0 / u, b=u)


def h_from_u(u: float) -> float:
    if not 0.0 < u < 1.0:
        raise DomainError(f"u must lie in (0,1), got {u}")
    return (1.0 - u * u) ** 2 / (16.0 * u * u)


# ---------------------------------------------------------------------------
# closed generator forms

_SUPPORTED = {(0, 1), (1, 1), (2, 1), (3, 1), (0, 3)}


def _generators_at_u(u, K, E):
    """Values of I01, I11, I21, I31, I03 given u and K, E at k=sqrt(1-u^4)."""
    u4 = u**4
    h = (1.0 - u * u) ** 2 / (16.0 * u * u)
    i01 = -4.0 * math.pi * h
    i21 = i01
    i11 = ((1.0 + u4) * K - 2.0 * E) / u
    i31 = ((1.0 + u4) * E - 2.0 * u4 * K) / (3.0 * u**3)
    i03 = -0.75 * (i31 + i01 + i11 + i21)
    return {(0, 1): i01, (1, 1): i11, (2, 1): i21, (3, 1): i31, (0, 3): i03}


def _generators_small_h(h):
    """Leading order near the center: I_{i,1} ~ (-1)^(i+1) 4 pi h, I_{0,3} ~ -3 pi h^2."""
    return {
        (0, 1): -4.0 * math.pi * h,
        (1, 1): 4.0 * math.pi * h,
        (2, 1): -4.0 * math.pi * h,
        (3, 1): 4.0 * math.pi * h,
        (0, 3): -3.0 * math.pi * h * h,
    }


def eval_generator(g, h: float) -> float:
    """Evaluate a basis generator at level h > 0."""
    ij = (g.i, g.j) if isinstance(g, GeneratorIndex) else tuple(g)
    if ij not in _SUPPORTED:
        raise DomainError(f"unsupported generator index {ij}")
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    if h < H_SMALL:
        return _generators_small_h(h)[ij]
    p = params_from_h(h)
    pair = agm_KE(p.k)
    return _generators_at_u(p.u, pair.K, pair.E)[ij]


def eval_I_h(c: BasisCombo, h: float) -> float:
    """Evaluate a basis combination at level h."""
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    if h < H_SMALL:
        gens = _generators_small_h(h)
    else:
        p = params_from_h(h)
        pair = agm_KE(p.k)
        gens = _generators_at_u(p.u, pair.K, pair.E)
    total = 0.0
    for poly, ij in (
        (c.p01, (0, 1)),
        (c.p11, (1, 1)),
        (c.p21, (2, 1)),
        (c.p31, (3, 1)),
        (c.p03, (0, 3)),
    ):
        if not poly.is_zero():
            total += poly(h) * gens[ij]
    return total


# ---------------------------------------------------------------------------
# u-form representation

def _trim(c) -> tuple[float, ...]:
    c = list(np.atleast_1d(np.asarray(c, dtype=float)))
    while c and c[-1] == 0.0:
        c.pop()
    return tuple(c)


def _nz(c):
    """Coefficient array, never empty (numpy poly helpers reject size 0)."""
    c = np.atleast_1d(np.asarray(c, dtype=float))
    return c if c.size else np.zeros(1)


def _pa(a, b):
    return npoly.polyadd(_nz(a), _nz(b))


def _pm(a, b):
    return npoly.polymul(_nz(a), _nz(b))


@dataclass(frozen=True)
class UForm:
    """u^{-d} (1-u^4)^{-l} [P(u) + Q(u) K(k) + R(u) E(k)], k = sqrt(1-u^4)."""

    d: int
    P: tuple[float, ...]
    Q: tuple[float, ...]
    R: tuple[float, ...]
    l: int = 0

    @staticmethod
    def make(d=0, P=(), Q=(), R=(), l=0) -> "UForm":
        return UForm(d=d, P=_trim(P), Q=_trim(Q), R=_trim(R), l=l)

    def __add__(self, other: "UForm") -> "UForm":
        if self.l != other.l:
            raise ValueError("cannot add u-forms with different singular exponents")
        d = max(self.d, other.d)

        def lift(coeffs, shift):
            return np.concatenate([np.zeros(shift), _nz(coeffs)])

        sa, sb = d - self.d, d - other.d
        return UForm.make(
            d=d,
            P=_pa(lift(self.P, sa), lift(other.P, sb)),
            Q=_pa(lift(self.Q, sa), lift(other.Q, sb)),
            R=_pa(lift(self.R, sa), lift(other.R, sb)),
            l=self.l,
        )

    def scale(self, c: float) -> "UForm":
        c = float(c)
        return UForm.make(
            d=self.d,
            P=np.asarray(self.P) * c,
            Q=np.asarray(self.Q) * c,
            R=np.asarray(self.R) * c,
            l=self.l,
        )

    def __call__(self, u):
        """Evaluate at u (scalar or array) in (0,1)."""
        u = np.asarray(u, dtype=float)
        if np.any((u <= 0) | (u >= 1)):
            raise DomainError("u-form evaluation requires u in (0,1)")
        k = np.sqrt(np.maximum(0.0, 1.0 - u**4))
        K, E = _agm_KE(k)
        val = np.zeros_like(u)
        if self.P:
            val = val + npoly.polyval(u, self.P)
        if self.Q:
            val = val + npoly.polyval(u, self.Q) * K
        if self.R:
            val = val + npoly.polyval(u, self.R) * E
        val = val * u ** (-float(self.d))
        if self.l:
            val = val * (1.0 - u**4) ** (-float(self.l))
        return float(val) if val.ndim == 0 else val

    def to_json(self) -> dict:
        fmt = lambda c: [repr(float(x)) for x in c]
        return {
            "d": self.d,
            "l": self.l,
            "P": fmt(self.P),
            "Q": fmt(self.Q),
            "R": fmt(self.R),
        }


# u-forms of the generators (coefficients ascending in u)
_G01 = UForm.make(d=2, P=(-math.pi / 4, 0, math.pi / 2, 0, -math.pi / 4))
_G11 = UForm.make(d=1, Q=(1, 0, 0, 0, 1), R=(-2,))
_G21 = _G01
_G31 = UForm.make(
    d=3,
    Q=(0, 0, 0, 0, -2 / 3),
    R=(1 / 3, 0, 0, 0, 1 / 3),
)
_G03 = (_G01 + _G11 + _G21 + _G31).scale(-0.75)

_UFORM_GEN = {
    (0, 1): _G01,
    (1, 1): _G11,
    (2, 1): _G21,
    (3, 1): _G31,
    (0, 3): _G03,
}

# (1-u^2)^2/16, the h(u) substitution factor, ascending coefficients
_H_OF_U = (1 / 16, 0, -2 / 16, 0, 1 / 16)


def to_u_form(c: BasisCombo) -> UForm:
    """Substitute h = (1-u^2)^2/(16u^2) into a basis combination."""
    acc = UForm.make()
    for poly, ij in (
        (c.p01, (0, 1)),
        (c.p11, (1, 1)),
        (c.p21, (2, 1)),
        (c.p31, (3, 1)),
        (c.p03, (0, 3)),
    ):
        if poly.is_zero():
            continue
        gen = _UFORM_GEN[ij]
        hpow = np.ones(1)
        for m, cm in enumerate(poly.coeffs):
            if m > 0:
                hpow = npoly.polymul(hpow, _H_OF_U)
            if cm == 0:
                continue
            term = UForm.make(
                d=gen.d + 2 * m,
                P=_pm(hpow, gen.P),
                Q=_pm(hpow, gen.Q),
                R=_pm(hpow, gen.R),
            ).scale(float(cm))
            acc = acc + term
    return acc


def pf_derivative(f: UForm, l: int = 1) -> UForm:
    """l-th derivative in u, staying in the closed K/E class.

    Uses dK/du = (2u^4 K - 2E)/(u(1-u^4)) and dE/du = 2u^3(K-E)/(1-u^4);
    each derivative raises both the u and the (1-u^4) prefactor exponents
    by one and the polynomial degrees by at most four.
    """
    if l < 1:
        raise DomainError("derivative order must be a positive integer")
    out = f
    for _ in range(l):
        out = _pf_derivative_once(out)
    return out


def _pf_derivative_once(f: UForm) -> UForm:
    d, l = f.d, f.l
    g = (-float(d), 0, 0, 0, float(d + 4 * l))  # -d + (d+4l) u^4
    w = (0, 1, 0, 0, 0, -1)  # u (1 - u^4)
    u4 = (0, 0, 0, 0, 2.0)  # 2 u^4
    P, Q, R = _nz(f.P), _nz(f.Q), _nz(f.R)

    def deriv_part(p):
        return _pa(_pm(g, p), _pm(w, npoly.polyder(p)))

    newP = deriv_part(P)
    newQ = _pa(deriv_part(Q), _pm(u4, _pa(Q, R)))
    newR = _pa(deriv_part(R), _pa(-2.0 * Q, -_pm(u4, R)))
    return UForm.make(d=d + 1, P=newP, Q=newQ, R=newR, l=l + 1)
