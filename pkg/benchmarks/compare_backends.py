#!/usr/bin/env python3
"""Time the jitted kernels against the pure-numpy fallback.

Runs the same tracking workloads in two subprocesses, one with
PATHCERT_BACKEND=numba and one with PATHCERT_BACKEND=numpy, and prints a
comparison table.  Per-workload times exclude JIT compilation: each child
warms the kernels on a small problem first (the warmup column reports that
cost, which for the numba child includes compilation or cache loading).

Usage:
    python benchmarks/compare_backends.py [--quick] [--repeat N]
"""

import argparse
import json
import os
import subprocess
import sys
from pathlib import Path

CHILD = r"""
import json
import sys
import time

from pathcert._backend import backend_name
from pathcert.bench import BenchmarkSpec, run_benchmark
from pathcert.tracker import TrackerConfig

quick = sys.argv[1] == "1"
repeat = int(sys.argv[2])

t0 = time.perf_counter()
run_benchmark(BenchmarkSpec("newton", m=10.0,
                            config=TrackerConfig(dt0=0.25, r0=0.25)))
warmup = time.perf_counter() - t0

workloads = [("newton m=2000, dt0=0.02",
              BenchmarkSpec("newton", m=2000.0,
                            config=TrackerConfig(dt0=0.02, r0=0.1)))]
if not quick:
    workloads.append(("random k=3, 8 paths", BenchmarkSpec("random", k=3)))
    workloads.append(("katsura n=3, 4 paths", BenchmarkSpec("katsura", n=3)))

out = {"backend": backend_name(), "warmup_s": warmup, "times": {}}
for label, spec in workloads:
    best = min(run_benchmark(spec).wall_time for _ in range(repeat))
    out["times"][label] = best
print(json.dumps(out))
"""


def run_child(backend, quick, repeat):
    env = dict(os.environ, PATHCERT_BACKEND=backend)
    src = Path(__file__).resolve().parent.parent / "src"
    env["PYTHONPATH"] = str(src) + os.pathsep + env.get("PYTHONPATH", "")
    proc = subprocess.run(
        [sys.executable, "-c", CHILD, "1" if quick else "0", str(repeat)],
        env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"{backend} child failed")
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true",
                    help="single small workload only")
    ap.add_argument("--repeat", type=int, default=3,
                    help="timed repetitions per workload (best is kept)")
    args = ap.parse_args()

    results = {}
    for backend in ("numba", "numpy"):
        print(f"running {backend} child...", flush=True)
        results[backend] = run_child(backend, args.quick, args.repeat)
        assert results[backend]["backend"] == backend

    nb, np_ = results["numba"], results["numpy"]
    width = max(len(k) for k in nb["times"]) + 2
    print()
    print(f"{'workload':<{width}} {'numba':>10} {'numpy':>10} {'speedup':>9}")
    print("-" * (width + 32))
    for label, t_nb in nb["times"].items():
        t_np = np_["times"][label]
        print(f"{label:<{width}} {t_nb:>9.3f}s {t_np:>9.3f}s "
              f"{t_np / t_nb:>8.1f}x")
    print("-" * (width + 32))
    print(f"{'warmup (compile/cache)':<{width}} {nb['warmup_s']:>9.3f}s "
          f"{np_['warmup_s']:>9.3f}s")


if __name__ == "__main__":
    main()
