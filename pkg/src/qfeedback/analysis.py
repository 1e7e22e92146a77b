"""Stabilization conditions, plateau and transient extraction, parameter sweeps."""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import SystemParams, compute_phases, phase_distance
from .dde import Trajectory, integrate_dde
from .errors import ConfigError, NotStabilized, QFeedbackError, TooShort
from .models import rhs_pumped

DEFAULT_PHASE_TOL = 1e-6
# Final-interval (max - min)/mean below which the run counts as trapped.
DEFAULT_REL_FLATNESS = 0.02
DEFAULT_BAND = 0.01
MIN_DELAYS = 5


class Mechanism(enum.Enum):
    UNPUMPED = "UnpumpedEq14"
    PUMPED = "PumpedEq15"
    NONE = "None"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class StabilizationReport:
    """Predicted trapping and the phase residuals behind the verdict.

    ``phase_residuals`` holds the distances (rad) of omega2*tau, omega3*tau and
    rabi*tau/2 from the values the condition requires. When no mechanism
    fires they refer to whichever condition came closest.
    """

    stabilized: bool
    mechanism: Mechanism
    phase_residuals: tuple[float, float, float]
    candidate: Mechanism


def check_stabilization(params: SystemParams, phase_tol: float = DEFAULT_PHASE_TOL) -> StabilizationReport:
    """Test the two trapping conditions.

    Unpumped: pump inactive (rabi*tau/2 = 0 mod 2 pi), omega2*tau = 0 and
    omega3*tau = 0 mod 2 pi. Pumped: omega2*tau = 0, omega3*tau = pi and
    rabi*tau/2 = pi mod 2 pi.
    """
    ph = compute_phases(params)
    r2 = phase_distance(ph.phi2, 0.0)
    unpumped = (r2, phase_distance(ph.phi3, 0.0), phase_distance(ph.phi_pump, 0.0))
    pumped = (r2, phase_distance(ph.phi3, math.pi), phase_distance(ph.phi_pump, math.pi))
    if max(unpumped) < phase_tol:
        return StabilizationReport(True, Mechanism.UNPUMPED, unpumped, Mechanism.UNPUMPED)
    if max(pumped) < phase_tol:
        return StabilizationReport(True, Mechanism.PUMPED, pumped, Mechanism.PUMPED)
    if max(unpumped) <= max(pumped):
        return StabilizationReport(False, Mechanism.NONE, unpumped, Mechanism.UNPUMPED)
    return StabilizationReport(False, Mechanism.NONE, pumped, Mechanism.PUMPED)


def _final_interval(traj: Trajectory, tau: float) -> np.ndarray:
    t0 = float(traj.times[0])
    if traj.t_end - t0 < MIN_DELAYS * tau * (1.0 - 1e-12):
        raise TooShort(
            f"trajectory spans {traj.t_end - t0:.6g} ps, need at least {MIN_DELAYS} delays"
            f" ({MIN_DELAYS * tau:.6g} ps)"
        )
    # Half a step of slack so the node at exactly t_end - tau is included.
    cutoff = traj.t_end - tau - 0.5 * traj.dt
    return traj.populations[traj.times >= cutoff]


def trapped_value(
    traj: Trajectory, tau: float, rel_flatness: float = DEFAULT_REL_FLATNESS
) -> Optional[float]:
    """Mean |c3|^2 over the last delay interval, or ``None`` if that interval is not flat.

    Flatness is (max - min)/mean over the interval.

    Raises:
        TooShort: The trajectory covers less than 5 delays.
    """
    pops = _final_interval(traj, tau)
    mean = float(np.mean(pops))
    if not mean > 0.0:
        return None
    spread = float(np.max(pops) - np.min(pops))
    if spread / mean < rel_flatness:
        return mean
    return None


def transient_time(
    traj: Trajectory,
    tau: float,
    band: float = DEFAULT_BAND,
    rel_flatness: float = DEFAULT_REL_FLATNESS,
) -> float:
    """Earliest time after which |c3|^2 stays within +-band (relative) of the plateau.

    Raises:
        NotStabilized: No plateau in the final interval.
        TooShort: The trajectory covers less than 5 delays.
    """
    plateau = trapped_value(traj, tau, rel_flatness)
    if plateau is None:
        raise NotStabilized("trajectory has no plateau; transient time undefined")
    outside = np.nonzero(np.abs(traj.populations - plateau) > band * plateau)[0]
    if outside.size == 0:
        return float(traj.times[0])
    last = int(outside[-1])
    if last + 1 >= len(traj):
        raise NotStabilized("population leaves the band at the final sample")
    return float(traj.times[last + 1])


class SweepAxis(enum.Enum):
    TAU = "tau"
    RABI = "rabi"


@dataclass
class SweepPoint:
    value: float
    trajectory: Optional[Trajectory]
    plateau: Optional[float]
    transient: Optional[float]
    error: Optional[str] = None


@dataclass
class SweepResult:
    """One entry per swept value, in the order given."""

    axis: SweepAxis
    values: list[float]
    trajectories: list[Optional[Trajectory]]
    plateaus: list[Optional[float]]
    transients: list[Optional[float]]
    errors: list[Optional[str]]

    def __post_init__(self) -> None:
        n = len(self.values)
        if not all(len(x) == n for x in (self.trajectories, self.plateaus, self.transients, self.errors)):
            raise ValueError("sweep fields have inconsistent lengths")

    @property
    def succeeded(self) -> int:
        return sum(e is None for e in self.errors)


def _sweep_point(
    params: SystemParams,
    axis: SweepAxis,
    value: float,
    t_end: float,
    steps_per_delay: int,
    rel_flatness: float,
) -> SweepPoint:
    try:
        p = params.with_(**{axis.value: float(value)})
        traj = integrate_dde(rhs_pumped, p, t_end, steps_per_delay)
    except QFeedbackError as exc:
        return SweepPoint(value, None, None, None, f"{type(exc).__name__}: {exc}")
    try:
        plateau = trapped_value(traj, p.tau, rel_flatness)
    except TooShort as exc:
        return SweepPoint(value, traj, None, None, f"TooShort: {exc}")
    transient = None
    if plateau is not None:
        try:
            transient = transient_time(traj, p.tau, rel_flatness=rel_flatness)
        except NotStabilized:
            transient = None
    return SweepPoint(value, traj, plateau, transient)


def sweep(
    params: SystemParams,
    axis: str | SweepAxis,
    values: Sequence[float],
    t_end: float,
    steps_per_delay: int = 64,
    jobs: int = 1,
    rel_flatness: float = DEFAULT_REL_FLATNESS,
) -> SweepResult:
    """Integrate the pumped model once per value of ``tau`` or ``rabi``.

    Per-point failures are recorded in ``errors`` and the sweep continues.
    ``jobs > 1`` distributes points over worker processes; results keep the
    order of ``values``.
    """
    axis = SweepAxis(axis) if not isinstance(axis, SweepAxis) else axis
    values = [float(v) for v in values]
    if not values:
        raise ConfigError("sweep needs at least one value")
    args = [(params, axis, v, t_end, steps_per_delay, rel_flatness) for v in values]
    jobs = max(1, min(int(jobs), len(values)))
    if jobs == 1:
        points = [_sweep_point(*a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            points = list(pool.map(_sweep_point, *zip(*args)))
    return SweepResult(
        axis=axis,
        values=values,
        trajectories=[p.trajectory for p in points],
        plateaus=[p.plateau for p in points],
        transients=[p.transient for p in points],
        errors=[p.error for p in points],
    )


def default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1
