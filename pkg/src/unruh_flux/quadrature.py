"""Frequency quadrature for integrals of the form  int_0^inf g(x) dx,  x = omega/a.

The integrands met in the correlator have three awkward features: a simple
pole at x = 0 in each unfolded term (removed by folding x and -x together),
log-phase oscillations exp(i X x), and a slowly decaying 1/x^2 tail in the
Planckian branch.  The pieces here deal with each in turn:

* ``fold_integrand``  pairs f(x) with f(-x) so the pole cancels,
* a quadratic series window covers (0, zero_window],
* ``scipy.integrate.quad_vec`` does the bulk on [zero_window, omega_max] with
  breakpoints spaced by the local phase wavelength,
* optional oscillatory tails beyond omega_max go through QAWF.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import ConvergenceFailure, ParameterError, RangeLimit

#: Largest |log-phase| accepted before raising RangeLimit.
MAX_LOG_PHASE = 50.0


@dataclass(frozen=True)
class QuadratureSpec:
    omega_max: float = 40.0
    rel_tol: float = 1e-8
    abs_tol: float = 1e-13
    max_subdivisions: int = 2000
    zero_window: float = 1e-3

    def __post_init__(self):
        if not (self.omega_max > 0 and self.rel_tol > 0 and self.abs_tol > 0):
            raise ParameterError("omega_max and tolerances must be positive")
        if not (0 < self.zero_window < 0.01 * self.omega_max):
            raise ParameterError("zero_window must be positive and much smaller than omega_max")
        if self.max_subdivisions < 1:
            raise ParameterError("max_subdivisions must be at least 1")


class ThermalWeight(str, enum.Enum):
    PLANCKIAN = "planckian"
    COSH_SINH = "cosh_sinh"

    def __call__(self, x):
        """Weight as a function of x = omega/a (x != 0)."""
        x = np.asarray(x, dtype=float)
        if self is ThermalWeight.PLANCKIAN:
            return 1.0 / (-np.expm1(-2.0 * np.pi * x))
        return 1.0 / np.sinh(np.pi * x)


@dataclass(frozen=True)
class QuadResult:
    value: complex
    error: float
    n_evals: int


@dataclass(frozen=True)
class OscillatoryTail:
    """Contribution  int_{omega_max}^inf amplitude(x) exp(i phase x) dx.

    ``amplitude`` must be smooth, non-oscillatory and integrable on its own
    or against the oscillation.
    """

    amplitude: Callable[[float], complex]
    phase: float


def fold_integrand(f: Callable, symmetric: bool = False) -> Callable:
    """Return g(x) = f(x) + f(-x) for x > 0.

    Simple poles at the origin cancel between the two branches, which is the
    principal-value prescription.  With ``symmetric=True`` the caller asserts
    f(-x) = conj(f(x)) and only the real part 2 Re f(x) is returned.
    """
    if symmetric:
        return lambda x: 2.0 * np.real(f(x))
    return lambda x: f(x) + f(-x)


def _series_window(g, zw):
    xs = zw * np.array([1.0, 2.0, 3.0])
    ys = np.array([complex(g(x)) for x in xs])
    # quadratic through the three samples, integrated over (0, zw]
    c2 = (ys[2] - 2 * ys[1] + ys[0]) / (2 * zw * zw)
    c1 = (ys[1] - ys[0]) / zw - 3 * zw * c2
    c0 = ys[0] - c1 * zw - c2 * zw * zw
    quad_val = c0 * zw + c1 * zw**2 / 2 + c2 * zw**3 / 3
    lin_val = (ys[0] - (ys[1] - ys[0])) * zw + (ys[1] - ys[0]) / zw * zw**2 / 2
    return quad_val, abs(quad_val - lin_val), 3


def _tail(t: OscillatoryTail, x0: float, spec: QuadratureSpec):
    n = 0
    X = t.phase
    re_a = lambda x: complex(t.amplitude(x)).real
    im_a = lambda x: complex(t.amplitude(x)).imag
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, full_output=1)
    if abs(X) < 1e-8:
        r1 = integrate.quad(re_a, x0, np.inf, limit=spec.max_subdivisions, **kw)
        r2 = integrate.quad(im_a, x0, np.inf, limit=spec.max_subdivisions, **kw)
        n = r1[2]["neval"] + r2[2]["neval"]
        return complex(r1[0], r2[0]), abs(r1[1]) + abs(r2[1]), n
    w = abs(X)
    sgn = math.copysign(1.0, X)
    parts = {}
    for name, fn in (("re", re_a), ("im", im_a)):
        for wt in ("cos", "sin"):
            r = integrate.quad(fn, x0, np.inf, weight=wt, wvar=w, epsabs=spec.abs_tol,
                               limlst=200, full_output=1)
            parts[name, wt] = r[0]
            parts[name, wt, "err"] = abs(r[1])
            n += r[2]["neval"] if isinstance(r[2], dict) and "neval" in r[2] else 0
    # amplitude * (cos(Xx) + i sin(Xx)) with sin(Xx) = sgn * sin(|X| x)
    re = parts["re", "cos"] - sgn * parts["im", "sin"]
    im = sgn * parts["re", "sin"] + parts["im", "cos"]
    err = sum(v for k, v in parts.items() if k[-1] == "err")
    return complex(re, im), err, n


def integrate_omega(
    g: Callable,
    spec: QuadratureSpec = QuadratureSpec(),
    tails: Sequence[OscillatoryTail] = (),
    phase_scale: float = 0.0,
) -> QuadResult:
    """Integrate a folded, pole-free integrand over x in (0, inf).

    ``phase_scale`` is the largest |X| among the exp(i X x) factors inside
    ``g``; it sets the breakpoint spacing.  Anything beyond ``omega_max`` that
    is not covered by ``tails`` is assumed negligible.
    """
    if abs(phase_scale) > MAX_LOG_PHASE or any(abs(t.phase) > MAX_LOG_PHASE for t in tails):
        raise RangeLimit(f"log-phase exceeds {MAX_LOG_PHASE}; point too far from the trajectory")
    zw, top = spec.zero_window, spec.omega_max

    v0, e0, n0 = _series_window(g, zw)

    counter = [0]

    def gv(x):
        counter[0] += 1
        z = complex(g(x))
        return np.array([z.real, z.imag])

    points = None
    if phase_scale > 0:
        wl = 2 * np.pi / abs(phase_scale)
        npts = int(min((top - zw) / wl, spec.max_subdivisions // 2))
        if npts > 0:
            points = list(zw + wl * np.arange(1, npts + 1))
            points = [p for p in points if p < top]
    res, err, info = integrate.quad_vec(
        gv, zw, top, epsabs=spec.abs_tol, epsrel=spec.rel_tol, norm="max",
        limit=spec.max_subdivisions, points=points, full_output=True,
    )
    value = v0 + complex(res[0], res[1])
    error = e0 + float(err)
    n = n0 + counter[0]
    for t in tails:
        tv, te, tn = _tail(t, top, spec)
        value += tv
        error += te
        n += tn
    if not info.success:
        raise ConvergenceFailure(f"quadrature did not converge: {info.message}", value, error)
    return QuadResult(value, error, n)
