"""Renormalized stress tensor from point splitting, and flux through a world tube."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import kinematics as kin
from .correlator import (
    PhaseKind,
    active_terms,
    delta_two_point,
    integrate_term,
)
from .errors import OnTrajectory, ParameterError, TooCloseToSingularSet
from .oscillator import ModelParams
from .quadrature import QuadratureSpec, ThermalWeight

#: Default guard bands: |u|, |v| > GUARD_NULL / a and |lambda| > GUARD_LAMBDA.
GUARD_NULL = 0.05
GUARD_LAMBDA = 0.05


@dataclass(frozen=True)
class StressResult:
    t_uu: float
    t_vv: float
    t_uv: float
    error_estimate: float
    point: kin.SpacetimePoint
    n_evals: int = 0
    scale: float = 0.0


@dataclass(frozen=True)
class WorldTube:
    lambda_left: float = 0.5
    lambda_right: float = -0.5
    tau_min: float = -1.0
    tau_max: float = 1.0

    def __post_init__(self):
        if not (self.lambda_right < 0 < self.lambda_left < 1):
            raise ParameterError("world tube needs lambda_right < 0 < lambda_left < 1")
        if self.tau_min > self.tau_max:
            raise ParameterError("world tube needs tau_min <= tau_max")


@dataclass(frozen=True)
class FluxResult:
    value: float
    error: float
    scale: float = 0.0
    n_samples: int = 0


def check_guard(p: kin.SpacetimePoint, a: float, guard_null=GUARD_NULL, guard_lambda=GUARD_LAMBDA):
    """Raise if p sits on or too close to a horizon or the trajectory; return lambda."""
    region = kin.classify_region(p)
    lam = kin.lam(p, a)
    if min(abs(p.u), abs(p.v)) * a <= guard_null:
        raise TooCloseToSingularSet(f"(u={p.u}, v={p.v}) inside the horizon guard band")
    if abs(lam) <= guard_lambda:
        if abs(lam) < kin.LAMBDA_TOL and region is kin.Region.R:
            raise OnTrajectory(f"(u={p.u}, v={p.v}) lies on the trajectory")
        raise TooCloseToSingularSet(f"(u={p.u}, v={p.v}) inside the trajectory guard band")
    return lam


def stress_at(p: kin.SpacetimePoint, params: ModelParams, spec: QuadratureSpec = QuadratureSpec(),
              split: float | None = None, cross_check: bool = False, **guards) -> StressResult:
    """T_uu and T_vv at p, differentiating the active kernels under the integral.

    At coincidence only phases in (u, u') feel d_u d_u' and only phases in
    (v, v') feel d_v d_v'; each derivative brings down x^2/(u u') or
    x^2/(v v').  Cross phases in (u, v') and (u', v) are annihilated, so when
    none of the same-type terms survive the result is an exact zero and no
    quadrature is run.  With ``cross_check`` the point-split finite difference
    is evaluated as well and its deviation is folded into the error estimate.
    """
    check_guard(p, params.a, **guards)
    t = {"uu": 0.0, "vv": 0.0}
    err, n = 0.0, 0
    for term in active_terms(p, p, params):
        if term.phase_kind is PhaseKind.UU:
            key, d = "uu", p.u
        elif term.phase_kind is PhaseKind.VV:
            key, d = "vv", p.v
        else:
            continue
        r = integrate_term(term.chi_factor, term.thermal, 0.0,
                           params.gamma * term.prefactor * term.sign, params, spec,
                           planck_tail=term.thermal is ThermalWeight.PLANCKIAN,
                           extra=lambda x, d=d: x * x / (d * d))
        t[key] += r.value.real
        err += r.error
        n += r.n_evals
    if cross_check:
        fd = finite_difference_stress(p, params, spec, split)
        err += max(abs(fd.t_uu - t["uu"]), abs(fd.t_vv - t["vv"]))
        n += fd.n_evals
    return StressResult(t["uu"], t["vv"], 0.0, err, p, n)


def finite_difference_stress(p: kin.SpacetimePoint, params: ModelParams,
                             spec: QuadratureSpec = QuadratureSpec(),
                             split: float | None = None) -> StressResult:
    """Point-split T from central differences of G - G_f, Richardson over h and h/2."""
    h = 1e-3 / params.a if split is None else split
    n = [0]

    def delta(pp, qq):
        r = delta_two_point(pp, qq, params, spec)
        n[0] += r.n_evals
        return r.value

    def mixed(axis, step):
        def pt(s):
            return kin.SpacetimePoint(p.u + s, p.v) if axis == "u" else kin.SpacetimePoint(p.u, p.v + s)

        pp, pm = pt(step), pt(-step)
        return (delta(pp, pp) - delta(pp, pm) - delta(pm, pp) + delta(pm, pm)) / (4 * step * step)

    comps, errs = {}, []
    for axis in ("u", "v"):
        d1, d2 = mixed(axis, h), mixed(axis, h / 2)
        comps[axis] = ((4 * d2 - d1) / 3).real
        errs.append(abs(d2 - d1) / 3)
    return StressResult(comps["u"], comps["v"], 0.0, max(errs), p, n[0])


def _boundary(lam: float, eta, a: float):
    rho = math.sqrt(1.0 - lam) / a
    return -rho * np.exp(-eta), rho * np.exp(eta)


def world_tube_flux(tube: WorldTube, params: ModelParams, spec: QuadratureSpec = QuadratureSpec(),
                    n_samples: int = 16, stress: Callable | None = None, **guards) -> FluxResult:
    """Net outward flux of T through the two lambda = const walls of the tube.

    Each wall is the orbit u = -rho e^{-eta}, v = rho e^{eta} of the boost,
    eta = a tau.  Against the boost tangent (-u, v) the outward normal is
    (-u, -v) on the inner (lambda > 0) wall and (u, v) on the outer wall, so
    the flux densities are T_uu u^2 - T_vv v^2 and its negative, integrated in
    eta with ``n_samples`` Gauss-Legendre nodes.  Outward is positive.

    ``stress`` defaults to ``stress_at``; any callable p -> object with
    t_uu, t_vv, error_estimate (and optionally scale) may be used instead.
    """
    a = params.a
    e0, e1 = a * tube.tau_min, a * tube.tau_max
    g_null = guards.get("guard_null", GUARD_NULL)
    for lam in (tube.lambda_left, tube.lambda_right):
        if abs(lam) <= guards.get("guard_lambda", GUARD_LAMBDA):
            raise TooCloseToSingularSet(f"tube wall lambda={lam} inside the trajectory guard band")
        u_end, v_end = _boundary(lam, np.array([e1, e0]), a)
        if min(np.abs(u_end).min(), np.abs(v_end).min()) * a <= g_null:
            raise TooCloseToSingularSet(f"tube wall lambda={lam} reaches the horizon guard band")
    if e1 == e0:
        return FluxResult(0.0, 0.0, 0.0, 0)
    if stress is None:
        stress = lambda p: stress_at(p, params, spec, **guards)
    x, w = np.polynomial.legendre.leggauss(n_samples)
    eta = 0.5 * (e1 - e0) * x + 0.5 * (e1 + e0)
    w = 0.5 * (e1 - e0) * w
    total, err, scale = 0.0, 0.0, 0.0
    for lam, orient in ((tube.lambda_left, 1.0), (tube.lambda_right, -1.0)):
        us, vs = _boundary(lam, eta, a)
        for u, v, wi in zip(us, vs, w):
            r = stress(kin.SpacetimePoint(float(u), float(v)))
            total += wi * orient * (r.t_uu * u * u - r.t_vv * v * v)
            err += wi * r.error_estimate * (u * u + v * v)
            scale += wi * getattr(r, "scale", 0.0) * (u * u + v * v)
    value = complex(total) if np.iscomplexobj(total) else float(total)
    return FluxResult(value, float(err), float(scale), 2 * n_samples)
