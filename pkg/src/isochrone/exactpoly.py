"""Exact rational polynomials and generator combinations.

Everything in this module is exact: coefficients are `fractions.Fraction`
(arbitrary precision, stored in lowest terms with positive denominator),
polynomials are kept canonical (no trailing zero coefficients), and the
linear-combination container drops terms whose coefficient polynomial is
zero.  All values are immutable after construction and safe to share.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Union

Rational = Fraction

CoeffLike = Union[int, str, Fraction]


def _as_fraction(c: CoeffLike) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, (int, str)):
        return Fraction(c)
    if isinstance(c, float):
        # exact: every float is a dyadic rational
        return Fraction(c)
    raise TypeError(f"cannot interpret {c!r} as a rational coefficient")


class VariableMismatchError(ValueError):
    """Raised when two polynomials in different variables are combined."""


@dataclass(frozen=True)
class RationalPoly:
    """Univariate polynomial with exact rational coefficients.

    ``coeffs[k]`` is the coefficient of the k-th power; the zero polynomial
    has an empty coefficient tuple and degree -1.
    """

    coeffs: tuple[Fraction, ...]
    var: str = "h"

    @staticmethod
    def from_coeffs(coeffs: Iterable[CoeffLike], var: str = "h") -> "RationalPoly":
        cs = [_as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        return RationalPoly(tuple(cs), var)

    @staticmethod
    def zero(var: str = "h") -> "RationalPoly":
        return RationalPoly((), var)

    @staticmethod
    def constant(c: CoeffLike, var: str = "h") -> "RationalPoly":
        return RationalPoly.from_coeffs([c], var)

    @staticmethod
    def linear(c1: CoeffLike, c0: CoeffLike, var: str = "h") -> "RationalPoly":
        """The polynomial c1*var + c0."""
        return RationalPoly.from_coeffs([c0, c1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def _check_var(self, other: "RationalPoly") -> None:
        if self.var != other.var:
            raise VariableMismatchError(
                f"polynomial variables differ: {self.var!r} vs {other.var!r}"
            )

    def __add__(self, other: "RationalPoly") -> "RationalPoly":
        self._check_var(other)
        n = max(len(self.coeffs), len(other.coeffs))
        cs = [Fraction(0)] * n
        for i, c in enumerate(self.coeffs):
            cs[i] += c
        for i, c in enumerate(other.coeffs):
            cs[i] += c
        return RationalPoly.from_coeffs(cs, self.var)

    def __neg__(self) -> "RationalPoly":
        return RationalPoly(tuple(-c for c in self.coeffs), self.var)

    def __sub__(self, other: "RationalPoly") -> "RationalPoly":
        return self + (-other)

    def __mul__(self, other: "RationalPoly") -> "RationalPoly":
        self._check_var(other)
        if self.is_zero() or other.is_zero():
            return RationalPoly.zero(self.var)
        cs = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                cs[i + j] += a * b
        return RationalPoly.from_coeffs(cs, self.var)

    def scale(self, c: CoeffLike) -> "RationalPoly":
        c = _as_fraction(c)
        if c == 0:
            return RationalPoly.zero(self.var)
        return RationalPoly(tuple(c * a for a in self.coeffs), self.var)

    def __call__(self, x):
        """Horner evaluation; exact when x is a Fraction or int."""
        acc = Fraction(0) if isinstance(x, (Fraction, int)) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> dict:
        return {"var": self.var, "coeffs": [str(c) for c in self.coeffs]}

    @staticmethod
    def from_json(obj: Mapping) -> "RationalPoly":
        return RationalPoly.from_coeffs(
            [Fraction(s) for s in obj["coeffs"]], obj["var"]
        )

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                parts.append(str(c))
            elif k == 1:
                parts.append(f"{c}*{self.var}")
            else:
                parts.append(f"{c}*{self.var}^{k}")
        return " + ".join(parts)


class GeneratorIndex(NamedTuple):
    """Index (i, j) of a basic oval integral; j stays in {1, 3}, i >= -1."""

    i: int
    j: int


@dataclass(frozen=True)
class GeneratorCombo:
    """Finite linear combination of generators with RationalPoly(h) weights."""

    terms: tuple[tuple[GeneratorIndex, RationalPoly], ...]

    @staticmethod
    def from_dict(d: Mapping[GeneratorIndex, RationalPoly]) -> "GeneratorCombo":
        items = [
            (GeneratorIndex(*g), p) for g, p in d.items() if not p.is_zero()
        ]
        items.sort(key=lambda t: (t[0].j, t[0].i))
        return GeneratorCombo(tuple(items))

    @staticmethod
    def single(i: int, j: int, poly: RationalPoly | CoeffLike = 1) -> "GeneratorCombo":
        if not isinstance(poly, RationalPoly):
            poly = RationalPoly.constant(poly)
        return GeneratorCombo.from_dict({GeneratorIndex(i, j): poly})

    @staticmethod
    def empty() -> "GeneratorCombo":
        return GeneratorCombo(())

    def as_dict(self) -> dict[GeneratorIndex, RationalPoly]:
        return dict(self.terms)

    def coeff(self, i: int, j: int) -> RationalPoly:
        for g, p in self.terms:
            if g == (i, j):
                return p
        return RationalPoly.zero()

    def indices(self) -> list[GeneratorIndex]:
        return [g for g, _ in self.terms]

    def __add__(self, other: "GeneratorCombo") -> "GeneratorCombo":
        acc = self.as_dict()
        for g, p in other.terms:
            acc[g] = acc[g] + p if g in acc else p
        return GeneratorCombo.from_dict(acc)

    def scale_poly(self, w: RationalPoly) -> "GeneratorCombo":
        if w.is_zero():
            return GeneratorCombo.empty()
        return GeneratorCombo.from_dict({g: p * w for g, p in self.terms})

    def to_json(self) -> dict:
        return {
            "terms": [
                {"i": g.i, "j": g.j, "poly": p.to_json()} for g, p in self.terms
            ]
        }

    @staticmethod
    def from_json(obj: Mapping) -> "GeneratorCombo":
        return GeneratorCombo.from_dict(
            {
                GeneratorIndex(t["i"], t["j"]): RationalPoly.from_json(t["poly"])
                for t in obj["terms"]
            }
        )


def combo_linear(
    combos: list[GeneratorCombo], weights: list[RationalPoly]
) -> GeneratorCombo:
    """Exact linear combination sum(w_m * combo_m)."""
    if len(combos) != len(weights):
        raise ValueError(
            f"combo/weight length mismatch: {len(combos)} vs {len(weights)}"
        )
    for w in weights:
        if w.var != "h" and not w.is_zero():
            raise VariableMismatchError("combo weights must be polynomials in h")
    acc = GeneratorCombo.empty()
    for c, w in zip(combos, weights):
        acc = acc + c.scale_poly(w)
    return acc
