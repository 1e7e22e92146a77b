"""Parameter types, feedback phases and commensurability analysis.

Units: hbar = c = 1, times in ps, angular frequencies in rad/ps.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterator, Optional

from .errors import ConfigError

TWO_PI = 2.0 * math.pi

# Absolute floor for snapping a reduced phase onto 0.
PHASE_SNAP = 1e-12
# Rounding in omega * tau grows with its magnitude; allow this many ulps.
_SNAP_ULPS = 64


@dataclass(frozen=True)
class SystemParams:
    """Physical configuration of the pumped Lambda emitter in front of a mirror.

    Attributes:
        omega2: Angular frequency of the lower excited ground state |2>, rad/ps.
        omega3: Angular frequency of the excited state |3>, rad/ps.
        gamma: Decay rate, 1/ps.
        tau: Round-trip feedback delay, ps.
        rabi: Continuous-wave Rabi frequency of the |1>-|2> pump, rad/ps.
    """

    omega2: float
    omega3: float
    gamma: float
    tau: float
    rabi: float = 0.0

    def __post_init__(self) -> None:
        for name in ("omega2", "omega3", "gamma", "tau", "rabi"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite, got {value!r}")
        if self.gamma < 0.0:
            raise ConfigError(f"gamma must be >= 0, got {self.gamma}")
        if self.tau <= 0.0:
            raise ConfigError(f"tau must be > 0, got {self.tau}")
        if self.omega2 < 0.0:
            raise ConfigError(f"omega2 must be >= 0, got {self.omega2}")
        if self.omega3 <= self.omega2:
            raise ConfigError(
                f"omega3 must exceed omega2, got omega3={self.omega3}, omega2={self.omega2}"
            )
        if self.rabi < 0.0:
            raise ConfigError(f"rabi must be >= 0, got {self.rabi}")

    @classmethod
    def from_ordinary(
        cls,
        f2: float,
        f3: float,
        gamma: float,
        tau: float,
        rabi: float = 0.0,
    ) -> "SystemParams":
        """Build from ordinary frequencies omega/(2 pi) in 1/ps (Rabi stays in rad/ps)."""
        return cls(TWO_PI * f2, TWO_PI * f3, gamma, tau, rabi)

    def with_(self, **changes: float) -> "SystemParams":
        return replace(self, **changes)


def reduce_phase(x: float) -> float:
    """Reduce ``x`` into [0, 2 pi), snapping rounding-level residues onto 0."""
    r = math.fmod(x, TWO_PI)
    if r < 0.0:
        r += TWO_PI
    tol = max(PHASE_SNAP, _SNAP_ULPS * math.ulp(abs(x)))
    if r < tol or TWO_PI - r < tol or r >= TWO_PI:
        return 0.0
    return r


def phase_distance(phase: float, target: float) -> float:
    """Distance between two angles on the circle, in [0, pi]."""
    d = math.fmod(abs(phase - target), TWO_PI)
    return min(d, TWO_PI - d)


@dataclass(frozen=True)
class PhaseSet:
    """Round-trip phases, each reduced into [0, 2 pi).

    Attributes:
        phi2: omega2 * tau.
        phi3: omega3 * tau.
        phi_pump: rabi * tau / 2.
    """

    phi2: float
    phi3: float
    phi_pump: float


def compute_phases(params: SystemParams) -> PhaseSet:
    return PhaseSet(
        phi2=reduce_phase(params.omega2 * params.tau),
        phi3=reduce_phase(params.omega3 * params.tau),
        phi_pump=reduce_phase(0.5 * params.rabi * params.tau),
    )


class Parity(enum.Enum):
    PUMP_ASSISTED_FIRST = "PumpAssistedFirst"
    UNPUMPED_FIRST = "UnpumpedFirst"
    NOT_COMMENSURATE = "NotCommensurate"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ParityVerdict:
    """Outcome of the commensurability test on omega2/omega3.

    ``n`` and ``n_prime`` are the reduced numerator and denominator, or
    ``None`` when no fraction within tolerance exists. An even numerator means
    the shortest stabilizing delay needs the pump; an odd one means it does not.
    """

    variant: Parity
    n: Optional[int] = None
    n_prime: Optional[int] = None

    @property
    def commensurate(self) -> bool:
        return self.variant is not Parity.NOT_COMMENSURATE


def _convergents(x: Fraction) -> Iterator[Fraction]:
    h_prev, h = 0, 1
    k_prev, k = 1, 0
    while True:
        a = math.floor(x)
        h_prev, h = h, a * h + h_prev
        k_prev, k = k, a * k + k_prev
        yield Fraction(h, k)
        frac = x - a
        if frac == 0:
            return
        x = 1 / frac


def classify_parity(
    omega2: float,
    omega3: float,
    tol: float = 1e-9,
    max_denominator: int = 100_000,
) -> ParityVerdict:
    """Classify which scheme stabilizes at the shortest delay.

    Finds the simplest irreducible n/n' within relative error ``tol`` of
    omega2/omega3 with n' <= ``max_denominator``. Convergents of the continued
    fraction are tried in order of growing denominator; if none qualifies the
    best bounded approximation (which may be a semiconvergent) gets a last try.

    Args:
        omega2: Ground-state splitting, rad/ps (> 0).
        omega3: Excited-state frequency, rad/ps (> 0).
        tol: Relative tolerance on the ratio.
        max_denominator: Largest admissible n'.

    Returns:
        The verdict; ``NOT_COMMENSURATE`` is a regular outcome, not an error.
    """
    if not (omega2 > 0.0 and omega3 > 0.0):
        raise ConfigError("classify_parity needs omega2 > 0 and omega3 > 0")
    if max_denominator < 1:
        raise ConfigError("max_denominator must be >= 1")
    ratio = omega2 / omega3
    exact = Fraction(ratio)

    def within(f: Fraction) -> bool:
        return f.numerator > 0 and abs(float(f) - ratio) <= tol * ratio

    found: Optional[Fraction] = None
    for conv in _convergents(exact):
        if conv.denominator > max_denominator:
            break
        if within(conv):
            found = conv
            break
    if found is None:
        best = exact.limit_denominator(max_denominator)
        if within(best):
            found = best
    if found is None:
        return ParityVerdict(Parity.NOT_COMMENSURATE)
    n, n_prime = found.numerator, found.denominator
    variant = Parity.PUMP_ASSISTED_FIRST if n % 2 == 0 else Parity.UNPUMPED_FIRST
    return ParityVerdict(variant, n, n_prime)


def minimal_stabilizing_delays(
    omega2: float, verdict: ParityVerdict
) -> tuple[Optional[float], Optional[float]]:
    """Shortest delays stabilizing without and with the pump.

    With omega2/omega3 = n/n' irreducible, the unpumped condition needs
    tau = 2 pi n / omega2; the pumped one (omega3 tau an odd multiple of pi)
    exists only for even n, at half that delay.
    """
    if not verdict.commensurate:
        return None, None
    tau_unpumped = TWO_PI * verdict.n / omega2
    tau_pumped = 0.5 * tau_unpumped if verdict.n % 2 == 0 else None
    return tau_unpumped, tau_pumped
