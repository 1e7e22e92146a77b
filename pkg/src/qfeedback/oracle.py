"""Brute-force check of the delay equation: single-excitation Schroedinger
dynamics of emitter plus a discretized waveguide reservoir.

The reservoir band [omega3 - W, omega3 + W] is sampled uniformly and the
k-integrals become trapezoidal sums. Couplings follow g_k = g0 sin(k L) with
L = tau/2 and g0 = sqrt(2 gamma / pi) (hbar = c = 1).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .core import TWO_PI, SystemParams
from .dde import Trajectory, grid_steps, integrate_dde
from .errors import ConfigError, NonFiniteValue, NormDrift
from .models import rhs_pumped

log = logging.getLogger(__name__)

NORM_DRIFT_LIMIT = 1e-4
DEFAULT_WIDTH_FACTOR = 200.0  # W = factor * 2 pi / tau
DEFAULT_N_MODES = 2001
DEFAULT_PHASE_STEP = 0.25  # dt * W


def coupling_amplitude(gamma: float) -> float:
    """g0 from gamma = g0^2 pi / 2."""
    return math.sqrt(2.0 * gamma / math.pi)


def decay_rate(g0: float) -> float:
    return 0.5 * math.pi * g0 * g0


@dataclass(frozen=True)
class ModeGrid:
    """Uniform reservoir grid with trapezoidal weights.

    With c = 1 the mode frequency equals ``k_values``.
    """

    k_values: np.ndarray
    couplings: np.ndarray
    dk: float
    weights: np.ndarray
    omega3: float
    g0: float
    mirror_distance: float

    @property
    def n_modes(self) -> int:
        return self.k_values.shape[0]

    @property
    def half_width(self) -> float:
        return 0.5 * (self.k_values[-1] - self.k_values[0])

    @property
    def detuning(self) -> np.ndarray:
        return self.k_values - self.omega3

    @property
    def recurrence_time(self) -> float:
        """Time after which the discrete reservoir revives, 2 pi / dk."""
        return TWO_PI / self.dk


def build_mode_grid(
    params: SystemParams,
    half_width_W: Optional[float] = None,
    n_modes: int = DEFAULT_N_MODES,
    constant_coupling: bool = False,
) -> ModeGrid:
    """Discretize the band around omega3.

    Args:
        params: System parameters.
        half_width_W: Half band width W in rad/ps; default 200 * 2 pi / tau.
        n_modes: Number of grid points including both band edges.
        constant_coupling: Replace the sine law by its rms value g0/sqrt(2).
            Keeps the free decay rate but removes the mirror; a diagnostic.

    Raises:
        ConfigError: Band reaching k <= 0, or fewer than 2 modes.
    """
    W = DEFAULT_WIDTH_FACTOR * TWO_PI / params.tau if half_width_W is None else float(half_width_W)
    if not (W > 0.0 and math.isfinite(W)):
        raise ConfigError(f"half width must be positive, got {W}")
    if params.omega3 - W <= 0.0:
        raise ConfigError(
            f"band [omega3 - W, omega3 + W] reaches k <= 0 (omega3={params.omega3:g}, W={W:g})"
        )
    if n_modes < 2:
        raise ConfigError(f"n_modes must be >= 2, got {n_modes}")
    if n_modes < 1000:
        log.warning("n_modes=%d is below 1000; the reservoir is under-resolved", n_modes)
    resolve = 50.0 * max(params.gamma, TWO_PI / params.tau)
    if W <= resolve:
        log.warning("W=%g does not exceed 50*max(gamma, 2 pi/tau)=%g", W, resolve)

    k = np.linspace(params.omega3 - W, params.omega3 + W, n_modes)
    dk = 2.0 * W / (n_modes - 1)
    weights = np.full(n_modes, dk)
    weights[0] = weights[-1] = 0.5 * dk
    g0 = coupling_amplitude(params.gamma)
    L = 0.5 * params.tau
    if constant_coupling:
        couplings = np.full(n_modes, g0 / math.sqrt(2.0))
    else:
        couplings = g0 * np.sin(k * L)
    return ModeGrid(k, couplings, dk, weights, params.omega3, g0, L)


@dataclass(frozen=True)
class OracleState:
    """Single-excitation amplitudes: emitter c3 and photon amplitudes per mode.

    ``c1``/``c2`` belong to the emitter having decayed into |1>/|2>.
    """

    c3: complex
    c1: np.ndarray
    c2: np.ndarray
    weights: np.ndarray

    def norm(self) -> float:
        photons = np.dot(self.weights, np.abs(self.c1) ** 2 + np.abs(self.c2) ** 2)
        return abs(self.c3) ** 2 + float(photons)


def default_oracle_dt(grid: ModeGrid, tau: float, steps_per_delay: int = 64) -> float:
    """Largest dt with dt*W <= 0.25 that also divides tau / steps_per_delay."""
    coarse = tau / steps_per_delay
    sub = max(1, math.ceil(coarse * grid.half_width / DEFAULT_PHASE_STEP))
    return coarse / sub


def oracle_run(
    params: SystemParams,
    grid: ModeGrid,
    t_end: float,
    dt: float,
    backend: Optional[str] = None,
    check_norm: bool = True,
) -> tuple[Trajectory, OracleState]:
    """Integrate emitter plus reservoir; return the c3 trajectory and final state."""
    if not (dt > 0.0):
        raise ConfigError(f"dt must be positive, got {dt}")
    fastest = grid.half_width + params.omega2
    if dt * fastest >= 0.5:
        raise ConfigError(
            f"dt={dt:g} does not resolve the fastest phase (dt*(W+omega2)={dt * fastest:.3g} >= 0.5)"
        )
    n_steps = grid_steps(t_end, dt)
    kern = _backend.get(backend)
    c3, norms, c1, c2 = kern.oracle_rk4(
        grid.detuning, grid.couplings, grid.weights, params.omega2, params.rabi, dt, n_steps
    )
    c3 = np.asarray(c3)
    norms = np.asarray(norms)
    if not (np.all(np.isfinite(c3)) and np.all(np.isfinite(norms))):
        raise NonFiniteValue("oracle amplitudes became non-finite")
    drift = float(np.max(np.abs(norms - 1.0)))
    if check_norm and drift > NORM_DRIFT_LIMIT:
        raise NormDrift(f"norm drift {drift:.3g} exceeds {NORM_DRIFT_LIMIT:g}; reduce dt")
    traj = Trajectory(np.arange(n_steps + 1) * dt, c3, norms=norms)
    state = OracleState(complex(c3[-1]), np.asarray(c1), np.asarray(c2), grid.weights)
    return traj, state


def oracle_integrate(
    params: SystemParams,
    grid: ModeGrid,
    t_end: float,
    dt: float,
    backend: Optional[str] = None,
) -> Trajectory:
    """c3 trajectory from the mode-resolved model, starting at c3 = 1, empty reservoir.

    Raises:
        ConfigError: dt too coarse for the band (dt*(W+omega2) >= 0.5).
        NormDrift: Norm left 1 by more than 1e-4.
        NonFiniteValue: Overflow.
    """
    return oracle_run(params, grid, t_end, dt, backend)[0]


@dataclass(frozen=True)
class Comparison:
    """Oracle versus delay-equation result on a shared grid."""

    max_deviation: float
    norm_drift: float
    drift_per_delay: float
    t_end: float
    oracle: Trajectory
    dde: Trajectory


def compare_with_dde(
    params: SystemParams,
    grid: ModeGrid,
    t_end: float,
    dt: Optional[float] = None,
    steps_per_delay: int = 64,
    backend: Optional[str] = None,
) -> Comparison:
    """Run both paths and take the max |c3|^2 difference on the DDE grid.

    The oracle step is chosen (or must be given) as tau/(steps_per_delay*q)
    for an integer q, so every DDE node is an oracle node.
    """
    if dt is None:
        dt = default_oracle_dt(grid, params.tau, steps_per_delay)
    coarse = params.tau / steps_per_delay
    q = round(coarse / dt)
    if q < 1 or abs(q * dt - coarse) > 1e-9 * coarse:
        raise ConfigError(f"oracle dt={dt:g} must divide tau/steps_per_delay={coarse:g}")
    dde = integrate_dde(rhs_pumped, params, t_end, steps_per_delay, backend)
    orc = oracle_integrate(params, grid, t_end, dt, backend)
    k = min(len(dde), (len(orc) - 1) // q + 1)
    dev = float(np.max(np.abs(orc.populations[: (k - 1) * q + 1 : q] - dde.populations[:k])))
    drift = float(np.max(np.abs(orc.norms - 1.0)))
    return Comparison(
        max_deviation=dev,
        norm_drift=drift,
        drift_per_delay=drift / max(1.0, orc.t_end / params.tau),
        t_end=t_end,
        oracle=orc,
        dde=dde,
    )
