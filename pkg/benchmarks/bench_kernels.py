"""Wall-clock comparison of the compiled and pure-Python kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import math
import time

import numpy as np

from qfeedback import _backend
from qfeedback.core import SystemParams
from qfeedback.dde import integrate_dde
from qfeedback.models import rhs_pumped
from qfeedback.oracle import build_mode_grid, default_oracle_dt, oracle_integrate


def best_of(repeat, fn):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases():
    pumped_trap = SystemParams.from_ordinary(0.8, 239.3, 0.37037, 5.0, 2 * math.pi / 5.0)
    weak_coupling = SystemParams.from_ordinary(0.8, 239.3, 0.01935, 10.0)
    grid = build_mode_grid(weak_coupling, 100 * 2 * math.pi / 10.0, 1001)
    dt = default_oracle_dt(grid, 10.0)
    yield "dde pumped, tau=5, 150 ps, 64 steps/delay", lambda b: integrate_dde(
        rhs_pumped, pumped_trap, 150.0, 64, b
    ).populations
    yield "dde pumped, tau=5, 3000 ps, 256 steps/delay", lambda b: integrate_dde(
        rhs_pumped, pumped_trap, 3000.0, 256, b
    ).populations
    yield "oracle, 1001 modes, 30 ps", lambda b: oracle_integrate(weak_coupling, grid, 30.0, dt, b).populations


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    backends = _backend.available()
    print(f"backends: {', '.join(backends)}")
    for label, run in cases():
        timings = {}
        outputs = {}
        for b in backends:
            timings[b], outputs[b] = best_of(args.repeat, lambda: run(b))
        line = f"{label:48s}" + "".join(f"  {b} {timings[b] * 1e3:9.2f} ms" for b in backends)
        if len(backends) == 2:
            diff = float(np.max(np.abs(outputs["cython"] - outputs["python"])))
            line += f"  speedup {timings['python'] / timings['cython']:6.1f}x  max|dpop| {diff:.1e}"
        print(line)


if __name__ == "__main__":
    main()
