"""Ground-truth oracle: direct line integration over the level ovals.

The level set H(x,y) = h, h > 0, with
H(x,y) = x^{-2}(x-1)^2 (x^2+2x+1+4y^2)/16,
is an oval in the x < 0 half-plane with reciprocal endpoints -u and -1/u
on the x-axis.  Integrals I_{i,j} = oint (x-1) x^{i-3} y^j dx are computed
by substituting x = m + r sin(t), which absorbs the square-root endpoint
singularity of the upper branch, then applying adaptive quadrature.

Orientation is along the flow (upward at (-u,0)), which pins
I_{0,1} = -4*pi*h; the calibration test keeps that choice honest.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad

from .errors import DomainError

DEFAULT_RTOL = 1e-9


@dataclass(frozen=True)
class LevelOval:
    """Oval of the level set H = h with its x-axis endpoints."""

    h: float
    x_left: float
    x_right: float
    u: float


def oval_extent(h: float) -> LevelOval:
    """Endpoints of the oval: x_right = -u, x_left = -1/u."""
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    sh = math.sqrt(h)
    root = math.sqrt(4.0 * h + 1.0)
    u = root - 2.0 * sh  # in (0,1); product of the two roots is 1
    return LevelOval(h=h, x_left=-(root + 2.0 * sh), x_right=-u, u=u)


def y_on_curve(x: float, h: float) -> float:
    """Nonnegative branch y(x) of the oval at level h."""
    oval = oval_extent(h)
    if not (oval.x_left - 1e-12 <= x <= oval.x_right + 1e-12):
        raise DomainError(
            f"x={x} outside the oval span [{oval.x_left}, {oval.x_right}]"
        )
    val = 16.0 * h * x * x / (x - 1.0) ** 2 - (x + 1.0) ** 2
    return 0.5 * math.sqrt(max(0.0, val))


def _branch_factor(x: float, u: float) -> float:
    """sqrt((u-x)(1/u-x)) / (2(1-x)): the smooth part of y(x) after the
    endpoint factor sqrt((x-x_left)(x_right-x)) is pulled out."""
    return math.sqrt((u - x) * (1.0 / u - x)) / (2.0 * (1.0 - x))


def quad_Iij(
    i: int, j: int, h: float, rtol: float = DEFAULT_RTOL
) -> float:
    """Oval integral I_{i,j}(h); exactly 0 for even j by symmetry."""
    return quad_Iij_with_error(i, j, h, rtol)[0]


def quad_Iij_with_error(
    i: int, j: int, h: float, rtol: float = DEFAULT_RTOL
) -> tuple[float, float]:
    """I_{i,j}(h) together with the quadrature error estimate."""
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    if j < 1:
        raise DomainError(f"power j must be positive, got {j}")
    if j % 2 == 0:
        return 0.0, 0.0
    oval = oval_extent(h)
    m = 0.5 * (oval.x_left + oval.x_right)
    r = 0.5 * (oval.x_right - oval.x_left)
    u = oval.u

    def integrand(t: float) -> float:
        ct = math.cos(t)
        x = m + r * math.sin(t)
        ybr = r * ct * _branch_factor(x, u)
        return (x - 1.0) * x ** (i - 3) * ybr**j * r * ct

    val, err = quad(
        integrand, -math.pi / 2, math.pi / 2, epsabs=1e-14, epsrel=rtol, limit=200
    )
    return -2.0 * val, 2.0 * err


def quad_branch_sum(i: int, j: int, h: float, rtol: float = DEFAULT_RTOL) -> float:
    """I_{i,j} computed as the sum of upper and lower branch integrals
    without exploiting symmetry (used to cross-check the even-j shortcut)."""
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    oval = oval_extent(h)
    m = 0.5 * (oval.x_left + oval.x_right)
    r = 0.5 * (oval.x_right - oval.x_left)
    u = oval.u

    def branch(sign: float):
        def integrand(t: float) -> float:
            ct = math.cos(t)
            x = m + r * math.sin(t)
            y = sign * r * ct * _branch_factor(x, u)
            return (x - 1.0) * x ** (i - 3) * y**j * r * ct

        return quad(
            integrand, -math.pi / 2, math.pi / 2, epsabs=1e-13, epsrel=rtol, limit=200
        )[0]

    # upper branch traversed right-to-left, lower left-to-right
    return -branch(1.0) + branch(-1.0)


def quad_dy(i: int, j: int, h: float, rtol: float = DEFAULT_RTOL) -> float:
    """Oriented integral oint (x-1)^2 x^i y^j dy over the oval (even j).

    dy/dx is taken from the unperturbed vector field, so this route is
    independent of the dx-based integrals it is checked against.
    """
    if h <= 0:
        raise DomainError(f"level must satisfy h > 0, got {h}")
    if j % 2 == 1:
        return 0.0  # odd powers cancel between the two branches
    oval = oval_extent(h)
    m = 0.5 * (oval.x_left + oval.x_right)
    r = 0.5 * (oval.x_right - oval.x_left)
    u = oval.u

    def integrand(t: float) -> float:
        ct = math.cos(t)
        x = m + r * math.sin(t)
        y = r * ct * _branch_factor(x, u)
        # slope dy/dx = ydot/xdot on the upper branch; y^j / y stays finite
        num = y * y + 0.25 * (x + 1.0) * (x * x + 1.0)
        den = x * (1.0 - x)
        if j == 0:
            yj_over_y = 1.0 / (r * _branch_factor(x, u))  # cos t cancelled
            return (x - 1.0) ** 2 * x**i * (num / den) * yj_over_y * r
        return (x - 1.0) ** 2 * x**i * y ** (j - 1) * (num / den) * r * ct

    val, _ = quad(
        integrand, -math.pi / 2, math.pi / 2, epsabs=1e-13, epsrel=rtol, limit=200
    )
    return -2.0 * val
