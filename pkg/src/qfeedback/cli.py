"""Command-line front end.

Exit codes: 0 success or condition met, 1 condition not met, 2 errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .analysis import check_stabilization, default_jobs, sweep, transient_time, trapped_value
from .config import RunConfig, load_config
from .core import classify_parity, minimal_stabilizing_delays
from .dde import Trajectory, integrate_dde
from .errors import ConfigError, NotStabilized, QFeedbackError, TooShort
from .models import RHS_BY_KIND
from .oracle import NORM_DRIFT_LIMIT, build_mode_grid, compare_with_dde

EXIT_OK = 0
EXIT_NOT_MET = 1
EXIT_ERROR = 2

DEVIATION_LIMIT = 1e-2
FLOAT_FMT = "%.17g"


def _fmt(x: Optional[float]) -> str:
    return "nan" if x is None or not math.isfinite(x) else repr(float(x))


def _out_path(args: argparse.Namespace, cfg: RunConfig, default: str) -> Path:
    return Path(args.out or cfg.output or default)


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(path.stem + suffix)


def _write_effective(cfg: RunConfig, out: Path) -> Path:
    path = _sibling(out, ".effective.cfg")
    path.write_text(cfg.to_text())
    return path


def write_trajectory_csv(traj: Trajectory, path: Path) -> None:
    table = np.column_stack(
        [traj.times, traj.amplitudes.real, traj.amplitudes.imag, traj.populations]
    )
    np.savetxt(path, table, fmt=FLOAT_FMT, delimiter=",", header="t,re_c3,im_c3,pop", comments="")


def _plateau_summary(traj: Trajectory, cfg: RunConfig) -> str:
    tau = cfg.params.tau
    try:
        plateau = trapped_value(traj, tau, cfg.rel_flatness)
    except TooShort as exc:
        return f"plateau: n/a ({exc})"
    if plateau is None:
        return "plateau: NotStabilized"
    try:
        tr = transient_time(traj, tau, cfg.band, cfg.rel_flatness)
        return f"plateau: {plateau:.6g} (transient {tr:.6g} ps)"
    except NotStabilized:
        return f"plateau: {plateau:.6g}"


def cmd_simulate(cfg: RunConfig, args: argparse.Namespace) -> int:
    rhs = RHS_BY_KIND[cfg.model]
    traj = integrate_dde(rhs, cfg.params, cfg.effective_t_end, cfg.steps_per_delay)
    out = _out_path(args, cfg, "trajectory.csv")
    write_trajectory_csv(traj, out)
    _write_effective(cfg, out)
    print(f"model: {cfg.model.value}  points: {len(traj)}  csv: {out}")
    print(_plateau_summary(traj, cfg))
    return EXIT_OK


def cmd_check(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.params
    report = check_stabilization(p, cfg.phase_tol)
    print(f"mechanism: {report.mechanism}")
    r2, r3, rp = report.phase_residuals
    print(
        f"phase residuals vs {report.candidate}: "
        f"omega2*tau {r2:.3e} rad, omega3*tau {r3:.3e} rad, rabi*tau/2 {rp:.3e} rad"
    )
    if p.omega2 > 0.0:
        verdict = classify_parity(p.omega2, p.omega3, cfg.parity_tol, cfg.max_denominator)
        if verdict.commensurate:
            t_unp, t_p = minimal_stabilizing_delays(p.omega2, verdict)
            shortest = f"shortest delay unpumped {t_unp:.6g} ps"
            if t_p is not None:
                shortest += f", pumped {t_p:.6g} ps"
            print(f"parity: {verdict.variant} (omega2/omega3 = {verdict.n}/{verdict.n_prime}; {shortest})")
        else:
            print(f"parity: {verdict.variant}")
    else:
        print("parity: n/a (omega2 = 0)")
    return EXIT_OK if report.stabilized else EXIT_NOT_MET


def cmd_sweep(cfg: RunConfig, args: argparse.Namespace) -> int:
    if cfg.sweep_axis is None:
        raise ConfigError("sweep needs sweep_axis (tau or rabi)")
    if not cfg.sweep_values:
        raise ConfigError("sweep needs a nonempty sweep_values list")
    jobs = args.jobs if args.jobs is not None else default_jobs()
    res = sweep(
        cfg.params, cfg.sweep_axis, cfg.sweep_values, cfg.effective_t_end,
        cfg.steps_per_delay, jobs=jobs, rel_flatness=cfg.rel_flatness,
    )
    out = _out_path(args, cfg, "sweep.csv")
    blocks = []
    for value, traj in zip(res.values, res.trajectories):
        if traj is not None:
            blocks.append(np.column_stack([np.full(len(traj), value), traj.times, traj.populations]))
    table = np.vstack(blocks) if blocks else np.empty((0, 3))
    np.savetxt(out, table, fmt=FLOAT_FMT, delimiter=",", header="axis_value,t,pop", comments="")
    summary = _sibling(out, "_summary.csv")
    with open(summary, "w") as fh:
        fh.write("axis_value,plateau,transient_ps\n")
        for v, pl, tr in zip(res.values, res.plateaus, res.transients):
            fh.write(f"{_fmt(v)},{_fmt(pl)},{_fmt(tr)}\n")
    _write_effective(cfg, out)
    print(f"sweep over {res.axis.value}: {len(res.values)} points, {res.succeeded} succeeded")
    for v, pl, tr, err in zip(res.values, res.plateaus, res.transients, res.errors):
        if err is not None:
            print(f"  {res.axis.value}={v:.6g}: FAILED {err}", file=sys.stderr)
        elif pl is None:
            print(f"  {res.axis.value}={v:.6g}: NotStabilized")
        else:
            print(f"  {res.axis.value}={v:.6g}: plateau {pl:.6g}, transient {_fmt(tr)} ps")
    print(f"csv: {out}  summary: {summary}")
    return EXIT_OK if res.succeeded else EXIT_ERROR


def cmd_oracle_compare(cfg: RunConfig, args: argparse.Namespace) -> int:
    p = cfg.params
    t_end = min(cfg.effective_t_end, 3.0 * p.tau)
    grid = build_mode_grid(p, cfg.half_width_W, cfg.n_modes)
    cmp = compare_with_dde(p, grid, t_end, cfg.oracle_dt, cfg.steps_per_delay)
    print(
        f"grid: {grid.n_modes} modes, W = {grid.half_width:.6g} rad/ps, "
        f"recurrence {grid.recurrence_time:.6g} ps; t_end = {t_end:.6g} ps"
    )
    print(f"max |delta pop|: {cmp.max_deviation:.3e} (limit {DEVIATION_LIMIT:g})")
    print(f"norm drift: {cmp.norm_drift:.3e} (limit {NORM_DRIFT_LIMIT:g}); per delay {cmp.drift_per_delay:.3e}")
    ok = cmp.max_deviation < DEVIATION_LIMIT and cmp.norm_drift < NORM_DRIFT_LIMIT
    print("verdict: " + ("equivalent" if ok else "NOT equivalent"))
    return EXIT_OK if ok else EXIT_NOT_MET


COMMANDS = {
    "simulate": cmd_simulate,
    "check": cmd_check,
    "sweep": cmd_sweep,
    "oracle-compare": cmd_oracle_compare,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qfeedback",
        description="Time-delayed coherent feedback on a pumped Lambda emitter.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {
        "simulate": "integrate the delay equation and write t,re_c3,im_c3,pop",
        "check": "test the trapping conditions and the omega2/omega3 parity",
        "sweep": "integrate over a list of tau or rabi values",
        "oracle-compare": "compare against the mode-resolved Schroedinger integration",
    }
    for name, text in helps.items():
        sp = sub.add_parser(name, help=text)
        sp.add_argument("--config", required=True, help="key = value configuration file")
        sp.add_argument("--out", help="output CSV path (overrides 'output' in the config)")
        sp.add_argument("--jobs", type=int, default=None, help="worker processes for sweeps")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs is not None and args.jobs < 1:
        parser.error("--jobs must be >= 1")
    try:
        cfg = load_config(args.config)
        return COMMANDS[args.command](cfg, args)
    except QFeedbackError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
