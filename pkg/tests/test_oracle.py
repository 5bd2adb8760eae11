import numpy as np
import pytest

from unruh_flux import oracle as orc
from unruh_flux.errors import ContractError
from unruh_flux.kinematics import SpacetimePoint as P
from unruh_flux.oscillator import ModelParams, susceptibility


def test_mode_set_excludes_zero_and_reaches_continuum(bench):
    ms = orc.ModeSet.default(bench.a)
    k, w, free = ms.nodes(bench.a)
    assert np.all(k > 0)
    # with the 1/(4 pi k) normalization, sum of w * exp(-k) approximates its integral
    f = lambda kk: np.exp(-kk) * kk
    assert np.sum(w * f(k)) == pytest.approx(1.0, rel=1e-4)
    r = ms.refined()
    assert r.n_modes == 4 * ms.n_modes and r.n_ir == 4 * ms.n_ir


def test_null_mode_gives_zero(bench):
    tau = np.arange(0, 5, 0.01)
    q = orc.driven_response(lambda t: np.zeros_like(t), bench, tau)
    assert np.all(q == 0)


@pytest.mark.parametrize("w", [0.4, 1.3, 2.0, 5.0])
def test_pure_tone_matches_susceptibility(bench, w):
    tau = np.arange(0.0, 2.0, 0.005)
    q = orc.driven_response(lambda t: -1j * w * np.exp(-1j * w * t), bench, tau)
    amp = q / np.exp(-1j * w * tau)
    expect = -bench.coupling * np.conj(susceptibility(w, bench))
    assert np.max(np.abs(amp - expect)) < 1e-4 * abs(expect) + 1e-6


def test_burn_in_contract(bench):
    with pytest.raises(ContractError):
        orc.driven_response(lambda t: t, bench, np.arange(0, 1, 0.1), burn_in=1.0)
    with pytest.raises(ContractError):
        orc.mode_q_response(1.0, bench, [0.0, 0.1, 0.3])


def test_universal_response_matches_convolution(bench):
    # ties the boost-invariant ODE solution to the direct time-domain convolution;
    # a left mover is used because its drive frequency |k| e^{a tau} stays
    # resolvable over the whole burn-in (a right mover's grows without bound)
    k = -1.7
    tau = np.arange(-1.0, 1.0, 0.002)
    q_ode = orc.mode_q_response(k, bench, tau)
    q_conv = orc.driven_response(lambda t: orc.free_mode_derivative(k, t, bench.a), bench, tau,
                                 burn_in=12.0 / bench.gamma)
    assert np.max(np.abs(q_ode - q_conv)) < 2e-4 * np.max(np.abs(q_ode))


def test_mode_phi_int_branches(bench):
    q = lambda tau: 1.0 + tau
    assert orc.mode_phi_int(1.0, P(-2, 2), bench, q) == pytest.approx(0.5 * bench.coupling * (1 - np.log(2)))
    assert orc.mode_phi_int(1.0, P(1, 2), bench, q) == pytest.approx(0.5 * bench.coupling * (1 + np.log(2)))
    assert orc.mode_phi_int(1.0, P(-1, -2), bench, q) == 0
    assert orc.mode_phi_int(1.0, P(2, -1), bench, q) == 0


def test_causality_and_hermiticity(bench):
    assert orc.oracle_two_point(P(-1, -2), P(2, -1), bench) == 0
    a = orc.oracle_two_point(P(-2, 2), P(0.5, 0.7), bench)
    b = orc.oracle_two_point(P(0.5, 0.7), P(-2, 2), bench)
    assert a == pytest.approx(np.conj(b), abs=1e-15)


def test_ode_residual_second_order(bench):
    prev = None
    for d in (0.02, 0.01, 0.005):
        t = np.arange(-3, 3 + d / 2, d)
        q = orc.mode_q_response(-1.0, bench, t)
        res = ((q[2:] - 2 * q[1:-1] + q[:-2]) / d**2 + bench.gamma * (q[2:] - q[:-2]) / d
               + bench.omega0**2 * q[1:-1]
               + bench.coupling * orc.free_mode_derivative(-1.0, t[1:-1], bench.a))
        m = np.max(np.abs(res))
        if prev:
            assert np.log2(prev / m) >= 1.9
        prev = m


def test_noise_spectrum_detailed_balance(bench):
    s = orc.oracle_noise_spectrum(bench, omega_grid=[-1.0, 1.0])
    assert s[0] / s[1] == pytest.approx(np.exp(-2 * np.pi), rel=0.01)


def test_oracle_stress_cancels(bench):
    r = orc.oracle_stress(P(-2, 2), P(-2.5, 2), bench)
    assert abs(r["t_uu"]) <= 0.05 * r["scale_uu"]
    assert abs(r["t_vv"]) < 1e-10
