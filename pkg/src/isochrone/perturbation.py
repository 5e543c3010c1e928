"""Configuration of the polynomial perturbation f(x) = sum a_i x^i."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class PerturbationSpec:
    """Degree-n polynomial perturbation with strength eps."""

    n: int
    a: tuple[float, ...]
    eps: float = 0.0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("perturbation degree must be nonnegative")
        if len(self.a) != self.n + 1:
            raise ValueError(
                f"expected {self.n + 1} coefficients for degree {self.n}, "
                f"got {len(self.a)}"
            )
        object.__setattr__(self, "a", tuple(float(c) for c in self.a))

    @staticmethod
    def from_coeffs(a, eps: float = 0.0) -> "PerturbationSpec":
        a = tuple(float(c) for c in a)
        if not a:
            raise ValueError("coefficient list must be nonempty")
        return PerturbationSpec(len(a) - 1, a, eps)

    def f(self, x: float) -> float:
        """Evaluate f(x) by Horner's rule."""
        acc = 0.0
        for c in reversed(self.a):
            acc = acc * x + c
        return acc
