"""Compare the numba kernels against the pure-numpy fallback.

Runs each backend in its own subprocess (the backend is chosen at import
time from ALLOSYM_NUMBA), times every hot kernel on environment-sized
inputs plus one short end-to-end run, and prints a side-by-side table.

Usage: python benchmarks/bench_backends.py [--iterations N] [--steps N]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def child_payload(iterations: int, steps: int) -> dict:
    import numpy as np

    from allosym import experiment, kernels, probability
    from allosym.config import RunConfig

    kernels.warmup()
    rng = np.random.default_rng(0)
    A = rng.dirichlet(np.ones(36), size=36).T
    B = np.stack([rng.dirichlet(np.ones(36), size=36).T for _ in range(5)])
    phi = rng.dirichlet(np.ones(36))
    col_H = probability.column_entropies(A)
    log_C = probability.floored_log(rng.dirichlet(np.ones(36)))
    scores = rng.normal(size=15)
    p = rng.dirichlet(np.ones(36))
    q = rng.dirichlet(np.ones(36))
    counts = np.full((36, 36), 0.5)
    a_mat = counts / counts.sum(axis=0)
    ch = probability.column_entropies(a_mat)

    calls = {
        "softmax": lambda: kernels.softmax(scores, 1.0),
        "infer_state": lambda: kernels.infer_state(A, 7, B[0], phi),
        "efe_terms": lambda: kernels.efe_terms(B, A, col_H, phi, log_C),
        "likelihood_update": lambda: kernels.likelihood_update(
            counts, a_mat, ch, 7, phi
        ),
        "column_entropies": lambda: kernels.column_entropies(A),
        "jsd": lambda: kernels.jsd(p, q),
    }
    kernel_us = {}
    for name, call in calls.items():
        call()  # one unmeasured call per kernel
        t0 = time.perf_counter()
        for _ in range(iterations):
            call()
        kernel_us[name] = (time.perf_counter() - t0) / iterations * 1e6

    cfg = RunConfig(seed=0, total_steps=steps, snapshot_interval=steps)
    t0 = time.perf_counter()
    experiment.run(cfg)
    sim_seconds = time.perf_counter() - t0

    return {
        "backend": kernels.BACKEND,
        "kernel_us": kernel_us,
        "sim_seconds": sim_seconds,
        "sim_steps": steps,
    }


def run_child(numba_flag: str, iterations: int, steps: int) -> dict:
    env = dict(os.environ, ALLOSYM_NUMBA=numba_flag)
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--child",
         "--iterations", str(iterations), "--steps", str(steps)],
        capture_output=True, text=True, env=env, check=True,
    )
    return json.loads(proc.stdout)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--iterations", type=int, default=20000,
                        help="timed calls per kernel")
    parser.add_argument("--steps", type=int, default=500,
                        help="steps for the end-to-end timing run")
    parser.add_argument("--child", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args(argv)

    if args.child:
        json.dump(child_payload(args.iterations, args.steps), sys.stdout)
        return 0

    fast = run_child("1", args.iterations, args.steps)
    slow = run_child("0", args.iterations, args.steps)
    if fast["backend"] == slow["backend"]:
        print(f"warning: both children report backend {fast['backend']!r};"
              " is numba installed?", file=sys.stderr)

    width = max(len(k) for k in fast["kernel_us"]) + 2
    header = f"{'kernel':<{width}}{'numba us':>12}{'numpy us':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, numba_us in fast["kernel_us"].items():
        numpy_us = slow["kernel_us"][name]
        print(f"{name:<{width}}{numba_us:>12.2f}{numpy_us:>12.2f}"
              f"{numpy_us / numba_us:>9.1f}x")
    label = f"run ({fast['sim_steps']} steps)"
    print(f"{label:<{width}}{fast['sim_seconds'] * 1e6:>12.0f}"
          f"{slow['sim_seconds'] * 1e6:>12.0f}"
          f"{slow['sim_seconds'] / fast['sim_seconds']:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
