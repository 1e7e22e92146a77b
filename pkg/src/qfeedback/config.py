"""Run configuration files: flat ``key = value`` lines, ``#`` starts a comment.

Frequencies may be given as angular frequencies (``omega2``, rad/ps) or as
ordinary ones (``omega2_over_2pi``, 1/ps); exactly one form per frequency.
Example::

    model = pumped
    omega2_over_2pi = 0.8
    omega3_over_2pi = 239.3
    gamma = 0.37037
    tau = 5
    rabi = 1.2566370614359172
    t_end = 150
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .core import TWO_PI, SystemParams
from .errors import ConfigError
from .models import ModelKind

_FREQUENCIES = ("omega2", "omega3", "rabi")
_FLOAT_KEYS = {
    "gamma", "tau", "t_end", "half_width_W", "oracle_dt", "rel_flatness",
    "phase_tol", "parity_tol", "band",
}
_INT_KEYS = {"steps_per_delay", "n_modes", "max_denominator"}
_STR_KEYS = {"model", "sweep_axis", "output", "sweep_values"}
KNOWN_KEYS = (
    _FLOAT_KEYS | _INT_KEYS | _STR_KEYS
    | set(_FREQUENCIES) | {f"{k}_over_2pi" for k in _FREQUENCIES}
)


@dataclass
class RunConfig:
    params: SystemParams
    model: ModelKind = ModelKind.PUMPED
    t_end: Optional[float] = None
    steps_per_delay: int = 64
    output: Optional[str] = None
    sweep_axis: Optional[str] = None
    sweep_values: list[float] = field(default_factory=list)
    n_modes: int = 2001
    half_width_W: Optional[float] = None
    oracle_dt: Optional[float] = None
    rel_flatness: float = 0.02
    band: float = 0.01
    phase_tol: float = 1e-6
    parity_tol: float = 1e-9
    max_denominator: int = 100_000

    @property
    def effective_t_end(self) -> float:
        return 30.0 * self.params.tau if self.t_end is None else self.t_end

    def to_text(self) -> str:
        """Serialize with full float precision; parsing it back gives an equal config."""
        p = self.params
        lines = [
            "# effective configuration",
            f"model = {self.model.value}",
            f"omega2 = {p.omega2!r}",
            f"omega3 = {p.omega3!r}",
            f"gamma = {p.gamma!r}",
            f"tau = {p.tau!r}",
            f"rabi = {p.rabi!r}",
            f"t_end = {self.effective_t_end!r}",
            f"steps_per_delay = {self.steps_per_delay}",
            f"n_modes = {self.n_modes}",
            f"rel_flatness = {self.rel_flatness!r}",
            f"band = {self.band!r}",
            f"phase_tol = {self.phase_tol!r}",
            f"parity_tol = {self.parity_tol!r}",
            f"max_denominator = {self.max_denominator}",
        ]
        if self.half_width_W is not None:
            lines.append(f"half_width_W = {self.half_width_W!r}")
        if self.oracle_dt is not None:
            lines.append(f"oracle_dt = {self.oracle_dt!r}")
        if self.sweep_axis is not None:
            lines.append(f"sweep_axis = {self.sweep_axis}")
            lines.append("sweep_values = " + ", ".join(repr(v) for v in self.sweep_values))
        return "\n".join(lines) + "\n"


def parse_pairs(text: str) -> dict[str, str]:
    pairs: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key or not value:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in pairs:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        pairs[key] = value
    return pairs


def _float(key: str, value: str) -> float:
    try:
        x = float(value)
    except ValueError:
        raise ConfigError(f"{key}: not a number: {value!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"{key}: must be finite, got {value!r}")
    return x


def _int(key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"{key}: not an integer: {value!r}") from None


def _frequency(pairs: dict[str, str], name: str, required: bool) -> float:
    angular = pairs.get(name)
    ordinary = pairs.get(f"{name}_over_2pi")
    if angular is not None and ordinary is not None:
        raise ConfigError(f"give either {name} or {name}_over_2pi, not both")
    if angular is not None:
        return _float(name, angular)
    if ordinary is not None:
        return TWO_PI * _float(f"{name}_over_2pi", ordinary)
    if required:
        raise ConfigError(f"missing {name} (or {name}_over_2pi)")
    return 0.0


def parse_config(text: str) -> RunConfig:
    """Parse and validate a configuration; raises :class:`ConfigError` on any problem."""
    pairs = parse_pairs(text)
    for key in ("gamma", "tau"):
        if key not in pairs:
            raise ConfigError(f"missing {key}")
    params = SystemParams(
        omega2=_frequency(pairs, "omega2", True),
        omega3=_frequency(pairs, "omega3", True),
        gamma=_float("gamma", pairs["gamma"]),
        tau=_float("tau", pairs["tau"]),
        rabi=_frequency(pairs, "rabi", False),
    )
    cfg = RunConfig(params=params)
    if "model" in pairs:
        try:
            cfg.model = ModelKind.parse(pairs["model"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    for key in ("t_end", "half_width_W", "oracle_dt", "rel_flatness", "band", "phase_tol", "parity_tol"):
        if key in pairs:
            setattr(cfg, key, _float(key, pairs[key]))
    for key in _INT_KEYS:
        if key in pairs:
            setattr(cfg, key, _int(key, pairs[key]))
    if cfg.t_end is not None and cfg.t_end <= 0.0:
        raise ConfigError(f"t_end must be positive, got {cfg.t_end}")
    if cfg.steps_per_delay < 8:
        raise ConfigError(f"steps_per_delay must be >= 8, got {cfg.steps_per_delay}")
    cfg.output = pairs.get("output")
    if "sweep_axis" in pairs:
        axis = pairs["sweep_axis"].strip().lower()
        if axis not in ("tau", "rabi"):
            raise ConfigError(f"sweep_axis must be 'tau' or 'rabi', got {axis!r}")
        cfg.sweep_axis = axis
    if "sweep_values" in pairs:
        items = [s for s in pairs["sweep_values"].replace(",", " ").split() if s]
        cfg.sweep_values = [_float("sweep_values", s) for s in items]
    return cfg


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
