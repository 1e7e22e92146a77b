import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qfeedback.core import SystemParams
from qfeedback.dde import HistoryBuffer, Trajectory, integrate_dde, refine_until_converged
from qfeedback.errors import ConfigError, NoConvergence, NonFiniteValue
from qfeedback.models import rhs_pumped, rhs_two_level, rhs_unpumped

from conftest import GAMMA_LARGE, exact_series, lambda_params

DECAY = SystemParams(0.0, 3.0, GAMMA_LARGE, 10.0)


def pure_decay_error(m, backend=None):
    tr = integrate_dde(rhs_two_level, DECAY, 9.0, m, backend)
    exact = np.exp(-4 * GAMMA_LARGE * tr.times)
    return float(np.max(np.abs(tr.populations / exact - 1)))


def test_zero_rhs_keeps_amplitude():
    tr = integrate_dde(lambda t, c, cd, p: 0j, DECAY, 50.0, 16)
    assert np.all(tr.amplitudes == 1.0)


def test_zero_gamma_model_path(backend):
    p = SystemParams(1.0, 5.0, 0.0, 3.0, 0.7)
    tr = integrate_dde(rhs_pumped, p, 40.0, 16, backend)
    assert np.all(tr.populations == 1.0)


def test_pure_decay_closed_form(backend):
    assert pure_decay_error(512, backend) < 1e-8


def test_pure_decay_generic_callable():
    tr = integrate_dde(lambda t, c, cd, p: -2 * p.gamma * c, DECAY, 9.0, 512)
    exact = np.exp(-4 * GAMMA_LARGE * tr.times)
    assert np.max(np.abs(tr.populations / exact - 1)) < 1e-8


def test_fourth_order_convergence():
    errs = [pure_decay_error(m) for m in (32, 64, 128, 256)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(3.5 <= q <= 4.5 for q in orders), orders


@pytest.mark.parametrize("phase3", [0.0, math.pi, 1.3])
def test_two_level_matches_method_of_steps_series(phase3):
    # omega3 chosen so that omega3 * tau = 2 pi * 40 + phase3
    tau = 4.0
    p = SystemParams(0.0, (2 * math.pi * 40 + phase3) / tau, 0.3, tau)
    tr = integrate_dde(rhs_two_level, p, 6 * tau, 128)
    a = 2 * 0.3 * complex(math.cos(phase3), math.sin(phase3))
    for t in (3.0, 4.0, 5.5, 9.25, 16.0, 23.5):
        k = int(round(t / tr.dt))
        assert abs(tr.amplitudes[k] - exact_series(0.3, tau, a, t)) < 1e-8


def test_unpumped_generic_phase_matches_series():
    p = lambda_params(GAMMA_LARGE, 7.0)
    e3 = np.exp(1j * p.omega3 * p.tau)
    e2 = np.exp(-1j * p.omega2 * p.tau)
    a = GAMMA_LARGE * e3 * (1 + e2)
    tr = integrate_dde(rhs_unpumped, p, 35.0, 128)
    for t in (7.0, 14.0, 21.0, 35.0):
        k = int(round(t / tr.dt))
        assert abs(tr.amplitudes[k] - exact_series(GAMMA_LARGE, 7.0, a, t)) < 1e-8


def test_pumped_pumped_trap_plateau(pumped_trap):
    tr = integrate_dde(rhs_pumped, pumped_trap, 150.0, 64)
    assert tr.populations[-1] == pytest.approx(0.0449, abs=0.002)
    # frozen from the method-of-steps series (mpmath, 50 digits)
    assert tr.populations[-1] == pytest.approx(0.045198191516617903, abs=1e-9)


def test_grid_layout(unpumped_trap):
    tr = integrate_dde(rhs_unpumped, unpumped_trap, 300.0, 64)
    assert len(tr) == 30 * 64 + 1
    assert tr.dt == pytest.approx(10.0 / 64)
    assert tr.t_end == pytest.approx(300.0)
    np.testing.assert_array_equal(tr.populations, np.abs(tr.amplitudes) ** 2)


def test_t_end_not_on_grid_overshoots_by_less_than_step(unpumped_trap):
    tr = integrate_dde(rhs_unpumped, unpumped_trap, 12.34, 16)
    assert 12.34 <= tr.t_end < 12.34 + tr.dt


def test_deterministic(pumped_trap, backend):
    a = integrate_dde(rhs_pumped, pumped_trap, 100.0, 32, backend)
    b = integrate_dde(rhs_pumped, pumped_trap, 100.0, 32, backend)
    assert np.array_equal(a.amplitudes, b.amplitudes)


def test_short_run_rejected(unpumped_trap):
    with pytest.raises(ConfigError):
        integrate_dde(rhs_unpumped, unpumped_trap, 0.1, 16)


@pytest.mark.parametrize("m", [4, 7, 16.5])
def test_bad_steps_per_delay(unpumped_trap, m):
    with pytest.raises(ConfigError):
        integrate_dde(rhs_unpumped, unpumped_trap, 10.0, m)


def test_non_finite_detected():
    with pytest.raises(NonFiniteValue):
        integrate_dde(lambda t, c, cd, p: 1e200 * c * c, DECAY, 9.0, 16)


@settings(max_examples=40, deadline=None)
@given(
    f2=st.floats(0.0, 2.0),
    f3=st.floats(2.5, 300.0),
    gamma=st.floats(0.005, 1.0),
    tau=st.floats(0.5, 10.0),
    rabi=st.floats(0.0, 5.0),
)
def test_population_bounded(f2, f3, gamma, tau, rabi):
    p = SystemParams.from_ordinary(f2, f3, gamma, tau, rabi)
    tr = integrate_dde(rhs_pumped, p, 10 * tau, 32)
    assert np.all(tr.populations <= 1 + 1e-6)


def test_no_grid_scale_oscillation_between_onsets(unpumped_trap):
    # Away from t = k tau the solution is smooth: second differences shrink
    # like dt^2 under refinement instead of staying O(1).
    second = []
    for m in (128, 256):
        tr = integrate_dde(rhs_unpumped, unpumped_trap, 50.0, m)
        t = tr.times
        d2 = np.abs(np.diff(tr.amplitudes, 2))
        centres = t[1:-1]
        dist = np.abs(centres / 10.0 - np.round(centres / 10.0)) * 10.0
        second.append(d2[dist > 2 * tr.dt].max())
    assert second[1] < 0.35 * second[0]


def test_refine_zero_gamma():
    p = SystemParams(1.0, 5.0, 0.0, 3.0)
    tr = refine_until_converged(rhs_pumped, p, 30.0, 1e-10)
    assert len(tr) == 10 * 32 + 1


def test_refine_pure_decay():
    tr = refine_until_converged(rhs_two_level, DECAY, 9.0, 1e-9)
    exact = np.exp(-4 * GAMMA_LARGE * tr.times)
    assert np.max(np.abs(tr.populations - exact)) < 1e-9


def test_refine_unpumped_trap_plateau_self_converged(unpumped_trap):
    plateaus = []
    for m in (32, 64, 128):
        tr = integrate_dde(rhs_unpumped, unpumped_trap, 300.0, m)
        plateaus.append(tr.populations[tr.times >= 290.0 - 1e-9].mean())
    assert abs(plateaus[1] - plateaus[0]) < 1e-5
    assert abs(plateaus[2] - plateaus[1]) < 1e-5
    tr = refine_until_converged(rhs_unpumped, unpumped_trap, 300.0, 1e-6)
    assert tr.populations[-1] == pytest.approx(0.014141275359139133, abs=1e-8)


@pytest.mark.parametrize("tol", [0.0, 1e-13, 0.5])
def test_refine_rejects_tolerance(tol, unpumped_trap):
    with pytest.raises(ConfigError):
        refine_until_converged(rhs_unpumped, unpumped_trap, 30.0, tol)


def test_refine_no_convergence(unpumped_trap, monkeypatch):
    monkeypatch.setattr("qfeedback.dde.REFINE_MAX_DOUBLINGS", 2)
    with pytest.raises(NoConvergence):
        refine_until_converged(rhs_unpumped, unpumped_trap, 100.0, 1e-11)


class TestHistoryBuffer:
    def test_rejects_coarse_grid(self):
        with pytest.raises(ConfigError):
            HistoryBuffer(0.1, 4, 10)

    def test_hermite_midpoint_exact_for_cubic(self):
        m, dt = 8, 0.25
        buf = HistoryBuffer(dt, m, 40)
        f = lambda t: 1 + 2 * t - 0.5 * t ** 2 + 0.1j * t ** 3
        df = lambda t: 2 - t + 0.3j * t ** 2
        for k in range(20):
            buf.append(f(k * dt))
            buf.set_derivative(k, df(k * dt))
        buf.onset_left_deriv = df(m * dt)
        for k in range(m, 19):
            assert abs(buf.delayed_midpoint(k) - f((k + 0.5) * dt - m * dt)) < 1e-13
            assert buf.delayed(k) == f((k - m) * dt)
        assert buf.delayed(m - 1) == 0 and buf.delayed_midpoint(m - 1) == 0


class TestTrajectory:
    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            Trajectory(np.arange(3.0), np.ones(4))
