"""Null coordinates, the uniformly accelerated worldline and causal regions.

Points are stored in null coordinates ``u = t - x`` and ``v = t + x``.  The
worldline ``x = cosh(a tau)/a, t = sinh(a tau)/a`` is the hyperbola
``lambda = 1 + a^2 u v = 0`` inside the right wedge.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import BoundaryPoint, DomainError, ParameterError

#: |lambda| below this is reported as lying on the trajectory.
LAMBDA_TOL = 1e-9


@dataclass(frozen=True)
class SpacetimePoint:
    u: float
    v: float

    @classmethod
    def from_tx(cls, t: float, x: float) -> "SpacetimePoint":
        return to_null(t, x)

    @property
    def t(self) -> float:
        return 0.5 * (self.u + self.v)

    @property
    def x(self) -> float:
        return 0.5 * (self.v - self.u)


class Region(str, enum.Enum):
    F = "F"
    P = "P"
    R = "R"
    L = "L"


class Side(str, enum.Enum):
    RIGHT = "right"  # lambda < 0
    LEFT = "left"  # lambda > 0
    ON = "on"


@dataclass(frozen=True)
class TrajectorySide:
    tag: Side
    lam: float


def _check_accel(a: float) -> None:
    if not (a > 0 and math.isfinite(a)):
        raise ParameterError(f"acceleration must be positive and finite, got {a!r}")


def to_null(t: float, x: float) -> SpacetimePoint:
    if not (math.isfinite(t) and math.isfinite(x)):
        raise DomainError(f"non-finite event (t={t!r}, x={x!r})")
    return SpacetimePoint(t - x, t + x)


def trajectory(tau: float, a: float) -> SpacetimePoint:
    """Event at proper time ``tau`` on the worldline of acceleration ``a``."""
    _check_accel(a)
    return SpacetimePoint(-math.exp(-a * tau) / a, math.exp(a * tau) / a)


def lam(p: SpacetimePoint, a: float) -> float:
    return 1.0 + a * a * p.u * p.v


def classify_region(p: SpacetimePoint) -> Region:
    if p.u == 0 or p.v == 0:
        raise BoundaryPoint(f"point (u={p.u}, v={p.v}) lies on a null horizon")
    if p.u > 0:
        return Region.F if p.v > 0 else Region.L
    return Region.R if p.v > 0 else Region.P


def side_of_trajectory(p: SpacetimePoint, a: float, tol: float = LAMBDA_TOL) -> TrajectorySide:
    _check_accel(a)
    lm = lam(p, a)
    if abs(lm) < tol:
        return TrajectorySide(Side.ON, lm)
    return TrajectorySide(Side.LEFT if lm > 0 else Side.RIGHT, lm)


def retarded_time_right(u: float, a: float) -> float:
    """Emission proper time of the right-moving signal that reaches null line ``u``."""
    _check_accel(a)
    if not u < 0:
        raise DomainError(f"no right retarded time for u={u!r} (need u < 0)")
    return -math.log(abs(a * u)) / a


def retarded_time_left(v: float, a: float) -> float:
    """Emission proper time of the left-moving signal that reaches null line ``v``."""
    _check_accel(a)
    if not v > 0:
        raise DomainError(f"no left retarded time for v={v!r} (need v > 0)")
    return math.log(abs(a * v)) / a


def retarded_time(p: SpacetimePoint, a: float) -> float | None:
    """Proper time at which the oscillator influences ``p``, or None if it never does.

    Right of the trajectory the signal travels along ``u = const``; left of it
    (and inside the future of the worldline, ``v > 0``) along ``v = const``.
    """
    lm = lam(p, a)
    if p.u < 0 and lm < 0:
        return retarded_time_right(p.u, a)
    if p.v > 0 and lm > 0:
        return retarded_time_left(p.v, a)
    return None
