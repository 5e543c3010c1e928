"""Rewrite engine reducing the oval integrals I_{i,j} to the generator basis.

Every integral I_{i,j} with odd j reduces to an exact polynomial-coefficient
combination of the four generators {I_{0,1}, I_{1,1}, I_{2,1}, I_{0,3}}
(equivalently, with I_{3,1} in place of I_{0,3}).  Two index-lowering
recurrences drive the reduction; the chain transiently produces the
extended generators I_{1,3}, I_{-1,3}, I_{-1,1}, whose coefficients must
cancel exactly before a result is returned.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError, InternalConsistencyError
from .exactpoly import GeneratorCombo, GeneratorIndex, RationalPoly
from .perturbation import PerturbationSpec

# Generators the reduction is allowed to emit publicly.
BASIS = (
    GeneratorIndex(0, 1),
    GeneratorIndex(1, 1),
    GeneratorIndex(2, 1),
    GeneratorIndex(0, 3),
)
# Extended generators that may appear mid-chain only.
EXTENDED = (GeneratorIndex(1, 3), GeneratorIndex(-1, 3), GeneratorIndex(-1, 1))


def rewrite_25(i: int, j: int) -> GeneratorCombo:
    """Index-lowering recurrence in i.

    Rewrites I_{i,j} as a combination of integrals at indices
    (i-2,j), (i-4,j), (i-4,j+2), (i-2,j+2), (i-1,j), (i-3,j).
    """
    if j < 1 or j % 2 == 0:
        raise DomainError(f"j must be a positive odd integer, got {j}")
    den = i + 3 * j + 1
    if den == 0:
        raise DomainError(f"denominator i+3j+1 vanishes at (i,j)=({i},{j})")
    if i < 3:
        raise DomainError(
            f"i={i} would produce generator indices below -1 (need i >= 3)"
        )
    q = Fraction(1, den)
    s = i + j - 3
    return GeneratorCombo.from_dict(
        {
            GeneratorIndex(i - 2, j): RationalPoly.linear(16 * s * q, (2 * i - 10) * q),
            GeneratorIndex(i - 4, j): RationalPoly.constant(-s * q),
            GeneratorIndex(i - 4, j + 2): RationalPoly.constant(-4 * s * q),
            GeneratorIndex(i - 2, j + 2): RationalPoly.constant((4 * i - 4 * j - 12) * q),
            GeneratorIndex(i - 1, j): RationalPoly.constant(-(2 * j + 4) * q),
            GeneratorIndex(i - 3, j): RationalPoly.constant(-(2 * j + 4) * q),
        }
    )


def rewrite_26(i: int, j: int) -> GeneratorCombo:
    """Power-lowering recurrence in j (for odd j >= 3).

    Rewrites I_{i,j} as a combination of integrals at indices
    (i,j-2), (i-1,j), (i+1,j-2), (i-1,j-2), (i-2,j-2), (i-2,j).
    """
    if j < 3 or j % 2 == 0:
        raise DomainError(f"j must be an odd integer >= 3, got {j}")
    den = i + j - 1
    if den == 0:
        raise DomainError(f"denominator i+j-1 vanishes at (i,j)=({i},{j})")
    if i < 1:
        raise DomainError(
            f"i={i} would produce generator indices below -1 (need i >= 1)"
        )
    q = Fraction(j, den)
    return GeneratorCombo.from_dict(
        {
            GeneratorIndex(i, j - 2): RationalPoly.linear(4 * q, Fraction(3, 4) * q),
            GeneratorIndex(i - 1, j): RationalPoly.constant(Fraction(i + 3 * j - 3, den)),
            GeneratorIndex(i + 1, j - 2): RationalPoly.constant(q / 4),
            GeneratorIndex(i - 1, j - 2): RationalPoly.constant(q / 4),
            GeneratorIndex(i - 2, j - 2): RationalPoly.constant(-q / 4),
            GeneratorIndex(i - 2, j): RationalPoly.constant(-q),
        }
    )


@dataclass(frozen=True)
class BasisCombo:
    """Combination over the generator basis with RationalPoly(h) coefficients.

    At most one of p31 / p03 is nonzero; the two canonical forms are
    interchangeable via the I_{3,1} identity.
    """

    p01: RationalPoly
    p11: RationalPoly
    p21: RationalPoly
    p31: RationalPoly
    p03: RationalPoly

    def __post_init__(self):
        if not (self.p31.is_zero() or self.p03.is_zero()):
            raise InternalConsistencyError(
                "BasisCombo may carry I_{3,1} or I_{0,3} terms, not both"
            )

    @staticmethod
    def zero() -> "BasisCombo":
        z = RationalPoly.zero()
        return BasisCombo(z, z, z, z, z)

    @staticmethod
    def make(p01=None, p11=None, p21=None, p31=None, p03=None) -> "BasisCombo":
        z = RationalPoly.zero()
        return BasisCombo(p01 or z, p11 or z, p21 or z, p31 or z, p03 or z)

    def to_p03_form(self) -> "BasisCombo":
        """Eliminate I_{3,1} via I_{3,1} = -I_{0,1} - I_{1,1} - 4/3 I_{0,3} - I_{2,1}."""
        if self.p31.is_zero():
            return self
        w = self.p31
        return BasisCombo(
            self.p01 - w,
            self.p11 - w,
            self.p21 - w,
            RationalPoly.zero(),
            self.p03 - w.scale(Fraction(4, 3)),
        )

    def to_p31_form(self) -> "BasisCombo":
        """Eliminate I_{0,3} via I_{0,3} = -3/4 (I_{3,1}+I_{0,1}+I_{1,1}+I_{2,1})."""
        if self.p03.is_zero():
            return self
        w = self.p03.scale(Fraction(3, 4))
        return BasisCombo(
            self.p01 - w,
            self.p11 - w,
            self.p21 - w,
            self.p31 - w,
            RationalPoly.zero(),
        )

    def as_combo(self) -> GeneratorCombo:
        return GeneratorCombo.from_dict(
            {
                GeneratorIndex(0, 1): self.p01,
                GeneratorIndex(1, 1): self.p11,
                GeneratorIndex(2, 1): self.p21,
                GeneratorIndex(3, 1): self.p31,
                GeneratorIndex(0, 3): self.p03,
            }
        )

    def scale_poly(self, w: RationalPoly) -> "BasisCombo":
        return BasisCombo(
            self.p01 * w, self.p11 * w, self.p21 * w, self.p31 * w, self.p03 * w
        )

    def __add__(self, other: "BasisCombo") -> "BasisCombo":
        a, b = self, other
        # addition of mixed forms goes through a common form
        if not a.p31.is_zero() or not b.p31.is_zero():
            a, b = a.to_p31_form(), b.to_p31_form()
        return BasisCombo(
            a.p01 + b.p01, a.p11 + b.p11, a.p21 + b.p21, a.p31 + b.p31, a.p03 + b.p03
        )

    def is_zero(self) -> bool:
        return all(
            p.is_zero() for p in (self.p01, self.p11, self.p21, self.p31, self.p03)
        )

    def to_json(self) -> dict:
        return {
            "I01": self.p01.to_json(),
            "I11": self.p11.to_json(),
            "I21": self.p21.to_json(),
            "I31": self.p31.to_json(),
            "I03": self.p03.to_json(),
        }


def degree_profile(c: BasisCombo) -> tuple[int, int, int, int]:
    """Degrees (p01, p11, p21, p31-or-p03); the zero polynomial has degree -1."""
    last = c.p03 if c.p31.is_zero() else c.p31
    return (c.p01.degree, c.p11.degree, c.p21.degree, last.degree)


@lru_cache(maxsize=None)
def reduce_k3(k: int) -> GeneratorCombo:
    """Reduce I_{k,3} (k >= 2) to I_{1,3}, I_{0,3} and first-power integrals.

    The result is supported on {I_{1,3}, I_{0,3}} and {I_{i,1}: 0 <= i <= k+1};
    the coefficient of I_{1,3} is the constant k.
    """
    if k < 2:
        raise DomainError(f"reduce_k3 requires k >= 2, got {k}")
    acc = GeneratorCombo.empty()
    for g, p in rewrite_26(k, 3).terms:
        if g.j == 3 and g.i >= 2:
            acc = acc + reduce_k3(g.i).scale_poly(p)
        else:
            acc = acc + GeneratorCombo.single(g.i, g.j, p)
    return acc


def _reduce_combo(combo: GeneratorCombo) -> GeneratorCombo:
    """Push every term of a combo down to basis + extended generators."""
    acc = GeneratorCombo.empty()
    for g, p in combo.terms:
        if g.j == 1 and g.i >= 3:
            acc = acc + reduce_k1(g.i).as_combo().scale_poly(p)
        elif g.j == 3 and g.i >= 2:
            acc = acc + _reduce_combo(reduce_k3(g.i).scale_poly(p))
        else:
            acc = acc + GeneratorCombo.single(g.i, g.j, p)
    return acc


@lru_cache(maxsize=None)
def reduce_k1(k: int) -> BasisCombo:
    """Reduce I_{k,1} to the generator basis {I_{0,1}, I_{1,1}, I_{0,3}, I_{2,1}}.

    Any I_{1,3} left mid-chain is eliminated through its own first-power
    expansion; the extended-generator coefficients must then cancel exactly.
    """
    if k < 0:
        raise DomainError(f"reduce_k1 requires k >= 0, got {k}")
    one = RationalPoly.constant(1)
    if k == 0:
        return BasisCombo.make(p01=one)
    if k == 1:
        return BasisCombo.make(p11=one)
    if k == 2:
        return BasisCombo.make(p21=one)
    acc = _reduce_combo(rewrite_25(k, 1))
    # eliminate I_{1,3} using its expansion into first-power integrals
    p13 = acc.coeff(1, 3)
    if not p13.is_zero():
        acc = acc + GeneratorCombo.single(1, 3, -p13)
        acc = acc + rewrite_26(1, 3).scale_poly(p13)
    for g in EXTENDED:
        if not acc.coeff(g.i, g.j).is_zero():
            raise InternalConsistencyError(
                f"extended generator I_{{{g.i},{g.j}}} failed to cancel in "
                f"reduce_k1({k}): coefficient {acc.coeff(g.i, g.j)}"
            )
    allowed = set(BASIS)
    for g in acc.indices():
        if g not in allowed:
            raise InternalConsistencyError(
                f"unexpected generator I_{{{g.i},{g.j}}} in reduce_k1({k})"
            )
    return BasisCombo.make(
        p01=acc.coeff(0, 1),
        p11=acc.coeff(1, 1),
        p21=acc.coeff(2, 1),
        p03=acc.coeff(0, 3),
    )


def assemble_I(spec: PerturbationSpec) -> BasisCombo:
    """Assemble the Abelian integral I(h) = 1/2 sum a_i I_{i,1} over the basis.

    The real coefficients a_i are carried exactly (every float is a dyadic
    rational), so the output coefficients are still exact rationals.  The
    canonical output basis is {I_{0,1}, I_{1,1}, I_{2,1}, I_{3,1}}.
    """
    if not spec.a:
        raise DomainError("perturbation has no coefficients")
    acc = BasisCombo.zero()
    for i, ai in enumerate(spec.a):
        if ai == 0.0:
            continue
        w = RationalPoly.constant(Fraction(ai) / 2)
        acc = acc + reduce_k1(i).scale_poly(w)
    return acc.to_p31_form()
