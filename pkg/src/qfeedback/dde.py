"""Fixed-step RK4 integration of a scalar complex delay equation with one constant delay."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _backend, _pykernels
from .core import SystemParams
from .errors import ConfigError, NoConvergence, NonFiniteValue
from .history import MIN_STEPS_PER_DELAY, HistoryBuffer
from .models import KIND_BY_RHS, linear_coefficients

__all__ = [
    "HistoryBuffer",
    "Trajectory",
    "integrate_dde",
    "refine_until_converged",
    "grid_steps",
]

DelayedRhs = Callable[[float, complex, complex, SystemParams], complex]

REFINE_START = 16
REFINE_MAX_DOUBLINGS = 12


@dataclass(frozen=True)
class Trajectory:
    """Sampled excited-state amplitude c3(t).

    ``populations`` is derived as |c3|^2. ``norms`` is only filled in by the
    mode-resolved oracle, where it holds the total single-excitation norm.
    """

    times: np.ndarray
    amplitudes: np.ndarray
    populations: np.ndarray = field(init=False, repr=False)
    norms: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=np.float64)
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if times.shape != amps.shape or times.ndim != 1:
            raise ValueError("times and amplitudes must be 1-D arrays of equal length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "populations", amps.real ** 2 + amps.imag ** 2)

    def __len__(self) -> int:
        return self.times.shape[0]

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self) > 1 else 0.0

    @property
    def t_end(self) -> float:
        return float(self.times[-1])


def grid_steps(t_end: float, dt: float) -> int:
    """Number of steps of size ``dt`` needed to reach ``t_end`` (the last may overshoot)."""
    if not (t_end > 0.0 and math.isfinite(t_end)):
        raise ConfigError(f"t_end must be positive and finite, got {t_end}")
    if t_end < dt:
        raise ConfigError(f"t_end={t_end} is shorter than one step dt={dt}")
    return int(math.ceil(t_end / dt - 1e-9))


def _check_finite(amps: np.ndarray, dt: float) -> None:
    bad = ~np.isfinite(amps)
    if bad.any():
        k = int(np.argmax(bad))
        raise NonFiniteValue(f"amplitude became non-finite at t={k * dt:.6g} ps (step {k})")


def integrate_dde(
    rhs: DelayedRhs,
    params: SystemParams,
    t_end: float,
    steps_per_delay: int = 64,
    backend: Optional[str] = None,
) -> Trajectory:
    """Integrate dc3/dt = rhs(t, c3(t), c3(t - tau), params) from c3(0) = 1.

    The step is dt = tau / steps_per_delay, so every feedback onset t = k*tau
    lies on a grid node. The delayed argument is 0 for steps starting before
    tau. The three model functions of :mod:`qfeedback.models` run on the
    selected kernel backend; any other callable runs through the Python loop.

    Args:
        rhs: Delayed right-hand side.
        params: Physical parameters; only ``tau`` is read here.
        t_end: Final time, ps. The grid ends at the first node >= ``t_end``.
        steps_per_delay: Integer steps per delay interval, at least 8.
        backend: ``"cython"`` or ``"python"``; default is the active backend.

    Raises:
        ConfigError: Bad step count or ``t_end`` shorter than one step.
        NonFiniteValue: The amplitude overflowed or became NaN.
    """
    if int(steps_per_delay) != steps_per_delay or steps_per_delay < MIN_STEPS_PER_DELAY:
        raise ConfigError(
            f"steps_per_delay must be an integer >= {MIN_STEPS_PER_DELAY}, got {steps_per_delay}"
        )
    m = int(steps_per_delay)
    dt = params.tau / m
    n_steps = grid_steps(t_end, dt)

    kind = KIND_BY_RHS.get(rhs)
    try:
        if kind is not None:
            co = linear_coefficients(kind, params)
            amps = _backend.get(backend).dde_rk4_linear(
                co.local, co.const, co.minus, co.plus, co.omega2, dt, m, n_steps
            )
        else:
            amps = _pykernels.dde_rk4(
                lambda t, c, cd: rhs(t, c, cd, params), dt, m, n_steps
            )
    except OverflowError as exc:
        raise NonFiniteValue(f"overflow during integration: {exc}") from exc
    amps = np.asarray(amps)
    _check_finite(amps, dt)
    return Trajectory(np.arange(n_steps + 1) * dt, amps)


def refine_until_converged(
    rhs: DelayedRhs,
    params: SystemParams,
    t_end: float,
    rel_tol: float = 1e-8,
    backend: Optional[str] = None,
) -> Trajectory:
    """Double steps_per_delay from 16 until successive |c3|^2 agree pointwise.

    The comparison runs on the coarser grid (every second fine node). The
    finer of the last two trajectories is returned.

    Raises:
        ConfigError: ``rel_tol`` outside (1e-12, 1e-2).
        NoConvergence: Still not converged after 12 doublings.
    """
    if not (1e-12 < rel_tol < 1e-2):
        raise ConfigError(f"rel_tol must lie in (1e-12, 1e-2), got {rel_tol}")
    m = REFINE_START
    coarse = integrate_dde(rhs, params, t_end, m, backend)
    last_change = math.inf
    for _ in range(REFINE_MAX_DOUBLINGS):
        m *= 2
        fine = integrate_dde(rhs, params, t_end, m, backend)
        # The fine grid may have one extra node past t_end; compare the common part.
        k = min(len(coarse), (len(fine) + 1) // 2)
        last_change = float(
            np.max(np.abs(fine.populations[: 2 * k - 1 : 2] - coarse.populations[:k]))
        )
        if last_change < rel_tol:
            return fine
        coarse = fine
    raise NoConvergence(
        f"no convergence to {rel_tol:g} after {REFINE_MAX_DOUBLINGS} doublings "
        f"(last change {last_change:.3g} at steps_per_delay={m})"
    )
