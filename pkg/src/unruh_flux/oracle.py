"""Brute-force reference: discretized mode sum with a time-domain detector.

Every free mode is fed through the detector equation of motion

    Q'' + 2 gamma Q' + omega0^2 Q = -e d(phi_0)/d(tau)

along the worldline, and the field correction it produces is added back
at the retarded proper time.  None of the frequency-domain machinery of the
correlator module is used, so agreement between the two is a real check.

Boost invariance does most of the work.  On the trajectory a right-moving
mode of momentum k looks like exp(i exp(-(a tau - ln(k/a)))), so every right
mover is a shifted copy of a single universal response h_+(s), s = a tau.
Left movers share h_-(s) the same way.  The two universal responses are
solved once with an adaptive ODE integrator and cached.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, signal
from scipy.interpolate import CubicSpline

from . import kinematics as kin
from .errors import ContractError, ParameterError
from .oscillator import ModelParams, response_kernel


# --------------------------------------------------------------------- modes
@dataclass(frozen=True)
class ModeSet:
    """Momentum nodes for both signs of k (k = 0 excluded).

    A box of length L gives k_n = 2 pi n / L for n_cut <= n <= n_modes.
    Below n_cut the box spacing is too coarse for the soft modes, so the
    interval (a e^{s_ir}, (n_cut - 1/2) dk] is covered with n_ir log-spaced
    midpoints.  Above the box, n_uv log-spaced nodes up to a e^{s_uv} carry
    only the interaction-squared piece; the cross terms with the free mode
    oscillate away there.
    """

    box_length: float
    n_modes: int = 32768
    n_cut: int = 64
    n_ir: int = 25000
    n_uv: int = 4000
    s_ir: float = -250.0
    s_uv: float = 150.0

    def __post_init__(self):
        if not (self.box_length > 0 and 1 <= self.n_cut <= self.n_modes):
            raise ParameterError("invalid mode set")

    @classmethod
    def default(cls, a: float) -> "ModeSet":
        return cls(box_length=200.0 / a)

    def refined(self) -> "ModeSet":
        return ModeSet(self.box_length, 4 * self.n_modes, self.n_cut, 4 * self.n_ir,
                       self.n_uv, self.s_ir, self.s_uv)

    def nodes(self, a: float):
        """(k, weight, free) arrays for positive k; weights are dk measures."""
        dk = 2 * math.pi / self.box_length
        kb = dk * np.arange(self.n_cut, self.n_modes + 1)
        wb = np.full(kb.shape, dk)
        e = np.linspace(self.s_ir, math.log((self.n_cut - 0.5) * dk / a), self.n_ir + 1)
        ki = a * np.exp(0.5 * (e[1:] + e[:-1]))
        wi = ki * np.diff(e)
        e = np.linspace(math.log((self.n_modes + 0.5) * dk / a), self.s_uv, self.n_uv + 1)
        ku = a * np.exp(0.5 * (e[1:] + e[:-1]))
        wu = ku * np.diff(e)
        k = np.concatenate([ki, kb, ku])
        w = np.concatenate([wi, wb, wu])
        free = np.concatenate([np.ones(ki.size + kb.size, bool), np.zeros(ku.size, bool)])
        return k, w, free


def mode_norm(k):
    """Continuum normalization 1/sqrt(4 pi |k|), to be used with measure dk."""
    return 1.0 / np.sqrt(4 * np.pi * np.abs(k))


# ----------------------------------------------------- universal responses
class UniversalResponse:
    """Steady response h(s) to drive exp(i e^{-s}) (sign=+1) or exp(-i e^{s}) (sign=-1).

    Lengths are scaled by 1/a, so the ODE is h'' + 2 g h' + w0^2 h = -c df/ds with
    g = gamma/a, w0 = omega0/a, c = e/a.  Outside the integration window the
    solution is continued analytically: the drive frequency is either huge
    (adiabatic tracking) or negligible (quasistatic decay plus free ringdown).
    """

    def __init__(self, sign: int, g: float, w0: float, c: float, s_far: float = 60.0,
                 ds: float = 0.002):
        self.sign, self.g, self.w0, self.c = sign, g, w0, c
        self.om = math.sqrt(w0 * w0 - g * g)
        wmax = 3000.0 * max(1.0, w0)
        if sign > 0:
            s0, s1 = -math.log(wmax), s_far
            y0 = self._adiabatic(s0)
        else:
            s0, s1 = -s_far / 2, math.log(wmax)
            y0 = (0j, 0j)

        def rhs(s, y):
            q = y[0] + 1j * y[1]
            p = y[2] + 1j * y[3]
            acc = self._force(s) - 2 * g * p - w0 * w0 * q
            return [p.real, p.imag, acc.real, acc.imag]

        q0, p0 = y0
        self.sol = integrate.solve_ivp(rhs, (s0, s1), [q0.real, q0.imag, p0.real, p0.imag],
                                       method="DOP853", rtol=1e-11, atol=1e-13, dense_output=True)
        self.s0, self.s1 = s0, s1
        grid = np.linspace(s0, s1, int(math.ceil((s1 - s0) / ds)) + 1)
        y = self.sol.sol(grid)
        self._spline = CubicSpline(grid, y[0] + 1j * y[1])
        ye = self.sol.y[:, -1]
        qa, pa = self._quasistatic(s1) if sign > 0 else self._adiabatic(s1)
        self.ra = (ye[0] + 1j * ye[1]) - qa
        self.rb = ((ye[2] + 1j * ye[3]) - pa + g * self.ra) / self.om

    def _force(self, s):
        w = np.exp(-self.sign * s)
        f = np.exp(self.sign * 1j * w)
        return -self.c * (-1j * w * f)  # d/ds of either drive is -i w f

    def _adiabatic(self, s):
        w = np.exp(-self.sign * s)
        q = self._force(s) / (self.w0**2 - w * w - 2j * self.g * w)
        return q, -1j * w * q

    def _quasistatic(self, s):
        q = 1j * self.c * np.exp(-s) / (1 - 2 * self.g + self.w0**2)
        return q, -q

    def _ring(self, t):
        g, om, A, B = self.g, self.om, self.ra, self.rb
        env = np.exp(-g * t)
        q = env * (A * np.cos(om * t) + B * np.sin(om * t))
        p = env * ((-g * A + om * B) * np.cos(om * t) + (-g * B - om * A) * np.sin(om * t))
        return q, p

    def evaluate(self, s, derivative: bool = False, dense: bool = False):
        """h(s) (or h'(s)).  ``dense`` uses the integrator's own interpolant."""
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, complex)
        lo, hi = s < self.s0, s > self.s1
        mid = ~(lo | hi)
        if mid.any():
            if dense or derivative:
                y = self.sol.sol(s[mid])
                out[mid] = (y[2] + 1j * y[3]) if derivative else (y[0] + 1j * y[1])
            else:
                out[mid] = self._spline(s[mid])
        idx = 1 if derivative else 0
        if lo.any() and self.sign > 0:
            out[lo] = self._adiabatic(s[lo])[idx]
        if hi.any():
            base = self._quasistatic(s[hi]) if self.sign > 0 else self._adiabatic(s[hi])
            out[hi] = base[idx] + self._ring(s[hi] - self.s1)[idx]
        return out

    __call__ = evaluate


@functools.lru_cache(maxsize=16)
def _universal(sign: int, g: float, w0: float, c: float) -> UniversalResponse:
    return UniversalResponse(sign, g, w0, c)


def universal_response(sign: int, params: ModelParams) -> UniversalResponse:
    a = params.a
    return _universal(1 if sign > 0 else -1, params.gamma / a, params.omega0 / a,
                      params.coupling / a)


def _shift(k, a):
    """Offset in s = a tau that maps mode k onto the universal response."""
    k = np.asarray(k, dtype=float)
    return np.where(k > 0, -1.0, 1.0) * np.log(np.abs(k) / a)


# ------------------------------------------------------------ single modes
def free_mode_on_trajectory(k: float, tau, a: float):
    tau = np.asarray(tau, dtype=float)
    if k > 0:
        return np.exp(1j * (k / a) * np.exp(-a * tau))
    return np.exp(1j * (k / a) * np.exp(a * tau))


def free_mode_derivative(k: float, tau, a: float):
    tau = np.asarray(tau, dtype=float)
    rate = -1j * k * np.exp(-a * tau) if k > 0 else 1j * k * np.exp(a * tau)
    return rate * free_mode_on_trajectory(k, tau, a)


def _check_uniform(tau_grid):
    t = np.asarray(tau_grid, dtype=float)
    if t.ndim != 1 or t.size < 2:
        raise ContractError("tau grid must be a 1-D array with at least two points")
    d = np.diff(t)
    if np.any(d <= 0) or np.ptp(d) > 1e-9 * abs(d[0]) + 1e-12:
        raise ContractError("tau grid must be uniform and increasing")
    return t, float(d[0])


def mode_q_response(k: float, params: ModelParams, tau_grid) -> np.ndarray:
    """Steady-state Q_k(tau) of the detector driven by the unit-amplitude mode k."""
    if k == 0:
        raise ParameterError("the zero mode is excluded")
    t, _ = _check_uniform(tau_grid)
    h = universal_response(1 if k > 0 else -1, params)
    return h.evaluate(params.a * t + _shift(k, params.a), dense=True)


def driven_response(dphi, params: ModelParams, tau_grid, burn_in: float | None = None):
    """Q(tau) = -e int K(tau - tau') dphi(tau') dtau' by direct convolution.

    ``dphi`` is a callable giving d(phi_0)/d(tau).  The drive is switched on
    ``burn_in`` (at least 10/gamma) before the first requested time so that
    transients have decayed.  Trapezoid weights make the result O(dtau^2).
    """
    t, dt = _check_uniform(tau_grid)
    min_burn = 10.0 / params.gamma
    burn = 3 * min_burn if burn_in is None else burn_in
    if burn < min_burn:
        raise ContractError(f"burn-in span {burn:g} shorter than 10/gamma = {min_burn:g}")
    nb = int(math.ceil(burn / dt))
    full = t[0] + dt * np.arange(-nb, t.size)
    drive = np.asarray(dphi(full), dtype=complex) * np.ones(full.size)
    kern = response_kernel(dt * np.arange(full.size), params)
    w = np.ones(full.size)
    w[0] = 0.5
    conv = signal.fftconvolve(drive * w, kern)[: full.size]
    # the tau' = tau endpoint needs no half weight because K(0) = 0
    q = -params.coupling * dt * conv
    return q[nb:]


def mode_phi_int(k: float, p: kin.SpacetimePoint, params: ModelParams, q_response=None) -> complex:
    """Field correction (e/2) Q_k(tau_ret) at p, or 0 outside the causal future.

    ``q_response`` may be any callable tau -> Q_k(tau); the universal ODE
    response is used when omitted.
    """
    tau = kin.retarded_time(p, params.a)
    if tau is None:
        return 0j
    if q_response is None:
        q_response = lambda s: mode_q_response(k, params, [s, s + 1.0])[0]
    return 0.5 * params.coupling * complex(q_response(tau))


# ---------------------------------------------------------------- mode sums
def _mode_terms(p, q, params, k, sign, free_mask):
    a, e = params.a, params.coupling
    h = universal_response(sign, params)
    n2 = mode_norm(k) ** 2
    if sign > 0:
        fp, fq = np.exp(-1j * k * p.u), np.exp(-1j * k * q.u)
    else:
        fp, fq = np.exp(-1j * k * p.v), np.exp(-1j * k * q.v)
    shift = -sign * np.log(k / a)

    def interact(pt):
        tau = kin.retarded_time(pt, a)
        if tau is None:
            return np.zeros(k.shape, complex)
        return 0.5 * e * h(a * tau + shift)

    qp, qq = interact(p), interact(q)
    out = qp * np.conj(qq)
    out = out + np.where(free_mask, fp * np.conj(qq) + qp * np.conj(fq), 0.0)
    return n2 * out


def oracle_two_point(p: kin.SpacetimePoint, q: kin.SpacetimePoint, params: ModelParams,
                     modes: ModeSet | None = None, signs=(1, -1)) -> complex:
    """Mode-sum estimate of G(p, q) - G_f(p, q).

    Only the a_k a_k^dagger ordering contributes, so the sum is
    sum_k [f + phi_int](p) conj([f + phi_int](q)) - f(p) conj(f(q)).
    ``signs`` restricts the sum to right (+1) or left (-1) movers.
    """
    modes = modes or ModeSet.default(params.a)
    k, w, free = modes.nodes(params.a)
    total = 0j
    for sign in signs:
        total += complex(np.sum(_mode_terms(p, q, params, k, sign, free) * w))
    return total


def oracle_stress(p: kin.SpacetimePoint, q: kin.SpacetimePoint, params: ModelParams,
                  modes: ModeSet | None = None, h: float | None = None) -> dict:
    """Point-split derivatives d_u d_u' and d_v d_v' of the oracle at separated p, q.

    Central differences at step h and h/2 are Richardson-combined.  Besides the
    totals, the same derivative of each mover family alone is returned as
    ``scale_uu`` / ``scale_vv``; the totals vanish only through cancellation
    between pieces of that size.
    """
    a = params.a
    h = 0.02 / a if h is None else h
    modes = modes or ModeSet.default(a)

    def mixed(axis, step, signs):
        def G(d1, d2):
            if axis == "u":
                pp = kin.SpacetimePoint(p.u + d1 * step, p.v)
                qq = kin.SpacetimePoint(q.u + d2 * step, q.v)
            else:
                pp = kin.SpacetimePoint(p.u, p.v + d1 * step)
                qq = kin.SpacetimePoint(q.u, q.v + d2 * step)
            return oracle_two_point(pp, qq, params, modes, signs)
        return (G(1, 1) - G(1, -1) - G(-1, 1) + G(-1, -1)) / (4 * step * step)

    def rich(axis, signs):
        d1, d2 = mixed(axis, h, signs), mixed(axis, h / 2, signs)
        return (4 * d2 - d1) / 3, abs(d2 - d1) / 3

    out = {}
    for axis in ("u", "v"):
        parts = [rich(axis, (s,)) for s in (1, -1)]
        out[f"t_{axis}{axis}"] = parts[0][0] + parts[1][0]
        out[f"err_{axis}{axis}"] = parts[0][1] + parts[1][1]
        out[f"scale_{axis}{axis}"] = abs(parts[0][0]) + abs(parts[1][0])
    return out


# ------------------------------------------------------------ noise spectrum
def _mode_spectrum(k, omega, a):
    """|int e^{i omega tau} d/dtau f_k dtau|^2 via the contour shift tau -> tau - i pi/(2a).

    After the shift the integrand is a Gumbel density in a tau, real and
    rapidly decaying, times e^{i omega tau}; the shift itself contributes the
    factor e^{pi omega / (2a)} to the amplitude.
    """
    kk = abs(k) / a
    if k > 0:
        dens = lambda t: a * kk * math.exp(-a * t - kk * math.exp(-a * t))
        centre = math.log(kk) / a
    else:
        dens = lambda t: a * kk * math.exp(a * t - kk * math.exp(a * t))
        centre = -math.log(kk) / a
    lo, hi = centre - 40.0 / a, centre + 40.0 / a
    re = integrate.quad(lambda t: dens(t) * math.cos(omega * t), lo, hi, limit=400,
                        epsabs=1e-15, epsrel=1e-11)[0]
    im = integrate.quad(lambda t: dens(t) * math.sin(omega * t), lo, hi, limit=400,
                        epsabs=1e-15, epsrel=1e-11)[0]
    return math.exp(math.pi * omega / a) * (re * re + im * im)


def oracle_noise_spectrum(params: ModelParams, modes: ModeSet | None = None, omega_grid=(1.0,),
                          n_sample: int = 64) -> np.ndarray:
    """Power S(omega) of the e^{-i omega tau} component of d(phi_0)/d(tau) on the worldline.

    Summed over ``n_sample`` box modes of each sign spread logarithmically
    through the mode set.  Detailed balance at the Unruh temperature means
    S(-omega)/S(omega) = exp(-2 pi omega / a).
    """
    a = params.a
    modes = modes or ModeSet.default(a)
    dk = 2 * math.pi / modes.box_length
    n = np.unique(np.geomspace(1, modes.n_modes, n_sample).astype(int))
    ks = dk * n
    out = []
    for om in np.asarray(omega_grid, dtype=float):
        total = 0.0
        for sign in (1, -1):
            for kk in ks:
                total += dk * mode_norm(kk) ** 2 * _mode_spectrum(sign * kk, om, a)
        out.append(total / (2 * math.pi))
    return np.array(out)


@dataclass(frozen=True)
class OracleStress:
    t_uu: complex
    t_vv: complex
    error_estimate: float
    scale: float
    point: kin.SpacetimePoint


def oracle_stress_at(p: kin.SpacetimePoint, params: ModelParams, modes: ModeSet | None = None,
                     offset: float = 0.25, h: float | None = None) -> OracleStress:
    """Oracle stress probe at p, split against the partner point (1+offset)(u, v).

    Both points sit on the same side of the trajectory and in the same region,
    so the exact point-split derivatives are zero for any separation.
    ``scale`` is the size of the separately nonzero mover contributions.
    """
    q = kin.SpacetimePoint(p.u * (1 + offset), p.v * (1 + offset))
    r = oracle_stress(p, q, params, modes, h)
    return OracleStress(r["t_uu"], r["t_vv"], r["err_uu"] + r["err_vv"],
                        r["scale_uu"] + r["scale_vv"], p)
