"""Coherent time-delayed feedback on a Lambda-type emitter in front of a mirror.

The excited-state amplitude obeys a delay equation whose feedback phase can
be shifted by a continuous-wave pump on the ground-state transition. The
package integrates that equation, checks it against a mode-resolved
Schroedinger integration and analyses trapping.
"""
from .analysis import (
    Mechanism,
    StabilizationReport,
    SweepResult,
    check_stabilization,
    sweep,
    transient_time,
    trapped_value,
)
from .core import (
    Parity,
    ParityVerdict,
    PhaseSet,
    SystemParams,
    classify_parity,
    compute_phases,
    minimal_stabilizing_delays,
)
from .dde import HistoryBuffer, Trajectory, integrate_dde, refine_until_converged
from .errors import (
    ConfigError,
    NoConvergence,
    NonFiniteValue,
    NormDrift,
    NotStabilized,
    QFeedbackError,
    TooShort,
)
from .models import ModelKind, rhs_pumped, rhs_two_level, rhs_unpumped
from .oracle import ModeGrid, OracleState, build_mode_grid, oracle_integrate

__version__ = "0.1.0"
