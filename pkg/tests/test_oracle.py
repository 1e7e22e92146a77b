import logging
import math

import numpy as np
import pytest

from qfeedback.core import SystemParams
from qfeedback.errors import ConfigError, NormDrift
from qfeedback.oracle import (
    build_mode_grid,
    compare_with_dde,
    coupling_amplitude,
    decay_rate,
    default_oracle_dt,
    oracle_integrate,
    oracle_run,
)

from conftest import GAMMA_SMALL, lambda_params

TWO_PI = 2 * math.pi


@pytest.fixture(scope="module")
def weak_coupling():
    return lambda_params(GAMMA_SMALL, 10.0)


def test_coupling_amplitude_frozen():
    # sqrt(2 * 0.01935 / pi), evaluated independently
    g0 = coupling_amplitude(0.01935)
    assert g0 == pytest.approx(0.11098915530497877, rel=1e-14)
    assert decay_rate(g0) == pytest.approx(0.01935, rel=1e-14)


def test_trapezoid_layout(weak_coupling):
    W = 200.0
    grid = build_mode_grid(weak_coupling, W, 1001)
    assert grid.dk == pytest.approx(2 * W / 1000)
    assert grid.weights[0] == grid.weights[-1] == pytest.approx(grid.dk / 2)
    assert np.all(grid.weights[1:-1] == grid.dk)
    assert grid.k_values[0] == pytest.approx(weak_coupling.omega3 - W)
    assert grid.k_values[-1] == pytest.approx(weak_coupling.omega3 + W)
    assert grid.weights.sum() == pytest.approx(2 * W)


def test_sine_law_and_nodes(weak_coupling):
    grid = build_mode_grid(weak_coupling, 100.0, 1001)
    np.testing.assert_allclose(grid.couplings, grid.g0 * np.sin(grid.k_values * weak_coupling.tau / 2))
    # mirror node: k = 2 pi m / tau gives k L = pi m
    m = 2393
    k = TWO_PI * m / weak_coupling.tau
    assert abs(grid.g0 * math.sin(k * weak_coupling.tau / 2)) < 1e-11 * grid.g0 * m


def test_default_band(weak_coupling):
    grid = build_mode_grid(weak_coupling)
    assert grid.half_width == pytest.approx(200 * TWO_PI / 10.0)
    assert grid.n_modes == 2001


def test_band_must_stay_positive():
    p = SystemParams(1.0, 50.0, 0.01, 10.0)
    with pytest.raises(ConfigError):
        build_mode_grid(p, 60.0, 1001)


def test_coarse_grid_warns(weak_coupling, caplog):
    with caplog.at_level(logging.WARNING, logger="qfeedback.oracle"):
        build_mode_grid(weak_coupling, 100.0, 10)
    assert "under-resolved" in caplog.text


def test_initial_state(weak_coupling):
    grid = build_mode_grid(weak_coupling, 60.0, 1001)
    tr, state = oracle_run(weak_coupling, grid, 0.5, 0.004)
    assert tr.populations[0] == 1.0 and tr.norms[0] == 1.0
    assert state.norm() == pytest.approx(1.0, abs=1e-6)
    assert state.norm() == pytest.approx(tr.norms[-1], abs=1e-12)


def test_dt_must_resolve_band(weak_coupling):
    grid = build_mode_grid(weak_coupling, 100.0, 1001)
    with pytest.raises(ConfigError):
        oracle_integrate(weak_coupling, grid, 1.0, 0.01)


def test_norm_drift_raised(weak_coupling, monkeypatch):
    monkeypatch.setattr("qfeedback.oracle.NORM_DRIFT_LIMIT", 1e-15)
    grid = build_mode_grid(weak_coupling, 60.0, 1001)
    with pytest.raises(NormDrift):
        oracle_integrate(weak_coupling, grid, 2.0, 0.007)


@pytest.mark.parametrize("rabi", [0.0, TWO_PI / 10.0])
def test_free_decay_before_feedback(weak_coupling, rabi):
    p = weak_coupling.with_(rabi=rabi)
    grid = build_mode_grid(p, 100 * TWO_PI / p.tau, 1001)
    tr = oracle_integrate(p, grid, 9.5, 0.2 / grid.half_width)
    exact = np.exp(-4 * p.gamma * tr.times)
    assert np.max(np.abs(tr.populations / exact - 1)) < 0.02


def test_default_dt_divides_dde_step(weak_coupling):
    grid = build_mode_grid(weak_coupling)
    dt = default_oracle_dt(grid, 10.0, 64)
    q = (10.0 / 64) / dt
    assert abs(q - round(q)) < 1e-9
    assert dt * grid.half_width <= 0.25


def test_equivalence_improves_with_band(weak_coupling):
    devs = []
    for W_factor, n in ((100, 1001), (200, 2001)):
        grid = build_mode_grid(weak_coupling, W_factor * TWO_PI / 10.0, n)
        devs.append(compare_with_dde(weak_coupling, grid, 30.0).max_deviation)
    assert devs[0] < 1e-2
    assert devs[1] < devs[0]


def test_constant_coupling_removes_feedback(weak_coupling):
    W = 100 * TWO_PI / 10.0
    dt = 0.2 / W
    flat = oracle_integrate(weak_coupling, build_mode_grid(weak_coupling, W, 1001, constant_coupling=True), 30.0, dt)
    sine = oracle_integrate(weak_coupling, build_mode_grid(weak_coupling, W, 1001), 30.0, dt)
    exact = np.exp(-4 * GAMMA_SMALL * flat.times)
    early = flat.times < 10.0
    # same free decay before the first round trip ...
    assert np.max(np.abs(flat.populations - sine.populations)[early]) < 5e-3
    # ... but only the sine law feeds the excitation back
    assert np.max(np.abs(flat.populations - exact)) < 5e-3
    assert sine.populations[-1] - flat.populations[-1] > 0.2


def test_zero_gamma_constant(weak_coupling):
    p = weak_coupling.with_(gamma=0.0)
    grid = build_mode_grid(p, 60.0, 1001)
    cmp = compare_with_dde(p, grid, 30.0)
    assert cmp.max_deviation == 0.0
    assert np.all(cmp.oracle.populations == 1.0)
