"""Renormalized two-point function G - G_f of the field coupled to the detector.

Each contribution has the shape

    C * F(omega) * w(omega/a) / omega * |z|^{+-i omega/a}

with F one of chi*, chi or 4 gamma |chi|^2, a thermal weight w and a
log-phase z built from the null coordinates of the two points.  The step
functions multiplying each contribution depend only on the region and
trajectory side of the two points, so the active list is decided before
any numerics.  Whenever a chi*, chi, -4 gamma |chi|^2 triple shares a phase
and all three steps are on, the fluctuation-dissipation identity makes it
vanish and it is removed symbolically.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import kinematics as kin
from .errors import OnTrajectory
from .oscillator import ModelParams, susceptibility
from .quadrature import (
    OscillatoryTail,
    QuadratureSpec,
    ThermalWeight,
    fold_integrand,
    integrate_omega,
)


class PhaseKind(str, enum.Enum):
    UU = "uu'"
    VV = "vv'"
    UV = "uv'"
    VU = "u'v"


class ChiFactor(str, enum.Enum):
    CHI_STAR = "chi*"
    CHI = "chi"
    ABS2 = "4gamma|chi|^2"

    def evaluate(self, omega, params: ModelParams):
        chi = susceptibility(omega, params)
        if self is ChiFactor.CHI_STAR:
            return np.conj(chi)
        if self is ChiFactor.CHI:
            return chi
        return 4.0 * params.gamma * np.abs(chi) ** 2


@dataclass(frozen=True)
class CorrelatorTerm:
    phase_kind: PhaseKind
    chi_factor: ChiFactor
    thermal: ThermalWeight
    step_product: bool = True

    @property
    def ident(self) -> str:
        return f"{self.thermal.value}:{self.phase_kind.value}:{self.chi_factor.value}"

    @property
    def sign(self) -> float:
        return -1.0 if self.chi_factor is ChiFactor.ABS2 else 1.0

    @property
    def prefactor(self) -> float:
        # times gamma; the sinh block carries half the Planckian prefactor
        return -1.0 / (2 * math.pi) if self.thermal is ThermalWeight.PLANCKIAN else -1.0 / (4 * math.pi)


@dataclass(frozen=True)
class CorrelatorResult:
    value: complex
    error: float
    terms: tuple
    n_evals: int = 0


def _th(x: float) -> int:
    return 1 if x > 0 else 0


def _validate(p: kin.SpacetimePoint, a: float) -> float:
    region = kin.classify_region(p)  # raises BoundaryPoint on a horizon
    side = kin.side_of_trajectory(p, a)
    # lambda = 0 in L is the mirror hyperbola, which carries no source
    if side.tag is kin.Side.ON and region is kin.Region.R:
        raise OnTrajectory(f"point (u={p.u}, v={p.v}) lies on the trajectory")
    return side.lam


def _step_table(p, q, a):
    u, v, u2, v2 = p.u, p.v, q.u, q.v
    l, l2 = _validate(p, a), _validate(q, a)
    planck = {
        PhaseKind.UU: _th(-u) * _th(-u2) * np.array([_th(-l), _th(-l2), _th(-l) * _th(-l2)]),
        PhaseKind.VV: _th(v) * _th(v2) * np.array([_th(l), _th(l2), _th(l) * _th(l2)]),
        PhaseKind.UV: _th(-u) * _th(v2) * np.array([_th(-l), _th(l2), _th(-l) * _th(l2)]),
        PhaseKind.VU: _th(-u2) * _th(v) * np.array([_th(l), _th(-l2), _th(l) * _th(-l2)]),
    }
    sinh = {
        PhaseKind.UU: (_th(-u) * _th(-l) * _th(u2), _th(-u2) * _th(-l2) * _th(u)),
        PhaseKind.VV: (_th(v) * _th(l) * _th(-v2), _th(v2) * _th(l2) * _th(-v)),
        PhaseKind.UV: (_th(-u) * _th(-l) * _th(-v2), _th(v2) * _th(l2) * _th(u)),
        PhaseKind.VU: (_th(u2) * _th(l) * _th(v), _th(-u2) * _th(-l2) * _th(-v)),
    }
    return planck, sinh


def active_terms(p: kin.SpacetimePoint, q: kin.SpacetimePoint, params: ModelParams) -> list:
    """Terms whose step products are nonzero, after symbolic FDR cancellation."""
    planck, sinh = _step_table(p, q, params.a)
    chis = (ChiFactor.CHI_STAR, ChiFactor.CHI, ChiFactor.ABS2)
    out = []
    for kind in PhaseKind:
        flags = planck[kind]
        if flags.all():
            continue  # chi* + chi - 4 gamma |chi|^2 = 0
        out += [CorrelatorTerm(kind, c, ThermalWeight.PLANCKIAN) for c, f in zip(chis, flags) if f]
    for kind in PhaseKind:
        out += [CorrelatorTerm(kind, c, ThermalWeight.COSH_SINH) for c, f in zip(chis[:2], sinh[kind]) if f]
    return out


def log_phase(kind: PhaseKind, p, q, a: float) -> float:
    """X such that the phase factor equals exp(i X omega/a)."""
    if kind is PhaseKind.UU:
        return math.log(abs(p.u / q.u))
    if kind is PhaseKind.VV:
        return -math.log(abs(p.v / q.v))
    if kind is PhaseKind.UV:
        return math.log(abs(a * a * p.u * q.v))
    return -math.log(abs(a * a * q.u * p.v))


def integrate_term(chi: ChiFactor, weight, X: float, coef: float, params: ModelParams,
                   spec: QuadratureSpec, planck_tail: bool, extra=None):
    """Integral over omega of coef * F(omega) * weight(x) / x * exp(i X x), x = omega/a.

    The two branches x and -x are folded together.  ``planck_tail`` adds the
    slowly decaying piece beyond omega_max where the Planckian weight is 1.
    ``extra`` is an optional polynomial factor in x (from differentiating the
    phase) applied to both the bulk and the tail.
    """
    a = params.a
    ext = extra or (lambda x: 1.0)

    def f(x):
        return coef * chi.evaluate(a * x, params) * weight(x) / x * ext(x) * np.exp(1j * X * x)

    tails = ()
    if planck_tail:
        tails = (OscillatoryTail(lambda x: coef * chi.evaluate(a * x, params) / x * ext(x), X),)
    return integrate_omega(fold_integrand(f), spec, tails=tails, phase_scale=abs(X))


def delta_two_point(p: kin.SpacetimePoint, q: kin.SpacetimePoint, params: ModelParams,
                    spec: QuadratureSpec = QuadratureSpec()) -> CorrelatorResult:
    """G(p, q) - G_f(p, q), integrated term by term."""
    terms = active_terms(p, q, params)
    if not terms:
        return CorrelatorResult(0j, 0.0, ())
    value, error, n = 0j, 0.0, 0
    for t in terms:
        X = log_phase(t.phase_kind, p, q, params.a)
        r = integrate_term(t.chi_factor, t.thermal, X, params.gamma * t.prefactor * t.sign,
                           params, spec, planck_tail=t.thermal is ThermalWeight.PLANCKIAN)
        value += r.value
        error += r.error
        n += r.n_evals
    return CorrelatorResult(complex(value), float(error), tuple(t.ident for t in terms), n)


@dataclass(frozen=True)
class CoincidenceResult:
    value: float
    error: float
    n_evals: int = 0


def _damped_planck(x):
    return np.exp(-np.pi * np.asarray(x, dtype=float)) * ThermalWeight.PLANCKIAN(x)


def coincidence_delta_phi_sq(p: kin.SpacetimePoint, params: ModelParams,
                             spec: QuadratureSpec = QuadratureSpec()) -> CoincidenceResult:
    """<phi^2> - <phi_0^2> at a single event.

    The u-u' and v-v' terms cancel through the fluctuation-dissipation identity
    at coincidence, leaving two conjugate contributions in the log of a^2 u v.
    The result is zero off the future of the past horizon (v < 0).
    """
    lam = _validate(p, params.a)
    if p.v < 0:
        return CoincidenceResult(0.0, 0.0)
    s = lam - 1.0  # a^2 u v
    X = math.log(abs(s))
    coef = -params.gamma / (2 * math.pi)
    pieces = []
    if p.u < 0 and lam < 0:
        pieces += [(ChiFactor.CHI_STAR, X, ThermalWeight.PLANCKIAN, True),
                   (ChiFactor.CHI, -X, ThermalWeight.PLANCKIAN, True)]
    elif lam > 0 and p.u < 0:
        pieces += [(ChiFactor.CHI, X, ThermalWeight.PLANCKIAN, True),
                   (ChiFactor.CHI_STAR, -X, ThermalWeight.PLANCKIAN, True)]
    elif lam > 0:
        pieces += [(ChiFactor.CHI, X, _damped_planck, False),
                   (ChiFactor.CHI_STAR, -X, _damped_planck, False)]
    value, error, n = 0j, 0.0, 0
    for chi, ph, w, tail in pieces:
        r = integrate_term(chi, w, ph, coef, params, spec, planck_tail=tail)
        value += r.value
        error += r.error
        n += r.n_evals
    return CoincidenceResult(float(value.real), float(error + abs(value.imag)), n)
