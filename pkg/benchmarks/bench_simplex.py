"""Time the simplex pivot backends against each other.

Runs the same LP workloads once per backend by flipping ROBUSTCOORD_BACKEND
and reports per-solve times. Pivot sequences are identical across backends
(both use Bland's rule), so any gap is pure kernel speed. The numba kernel is
compiled (and cached) during warm-up, outside the timed region.

Usage: python3 benchmarks/bench_simplex.py [--repeats 5] [--instances 40]
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from robustcoord import Environment, WelfareSpec, build_lp, load_scenario, solve
from robustcoord._kernels import HAS_NUMBA


def random_program(rng: np.random.Generator):
    n_agents = int(rng.integers(3, 5))
    n_states = int(rng.integers(2, 4))
    env = Environment(
        n_agents=n_agents,
        labels=tuple(f"s{k}" for k in range(n_states)),
        prior=np.full(n_states, 1.0 / n_states),
        benefit=rng.uniform(0.0, 3.0, n_states),
        complementarity=rng.uniform(0.0, 2.0, n_states),
        cost=float(rng.uniform(0.5, 2.5)),
    )
    wf = WelfareSpec.power(n_agents, rng.uniform(1.0, 10.0, n_states), 1.5)
    return build_lp(env, wf)


def time_backend(backend: str, programs, repeats: int):
    os.environ["ROBUSTCOORD_BACKEND"] = backend
    solve(programs[0])  # warm-up: jit compile / cache load
    best = []
    for prog in programs:
        runs = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            sol = solve(prog)
            runs.append(time.perf_counter() - t0)
        assert sol.status == "OPTIMAL", sol.status
        best.append(min(runs))
    return np.array(best)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5, help="timed runs per program")
    ap.add_argument("--instances", type=int, default=40, help="random programs")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if not HAS_NUMBA:
        print("numba is not importable; only the numpy backend would run")

    scn = load_scenario("case1")
    rng = np.random.default_rng(args.seed)
    programs = [build_lp(scn.env, scn.welfare)]
    programs += [random_program(rng) for _ in range(args.instances)]
    sizes = [p.n_vars for p in programs]
    print(
        f"{len(programs)} programs, {min(sizes)}-{max(sizes)} variables, "
        f"best of {args.repeats} runs each"
    )

    results = {}
    for backend in ("numpy", "numba") if HAS_NUMBA else ("numpy",):
        times = time_backend(backend, programs, args.repeats)
        results[backend] = times
        print(
            f"{backend:>6}: total {times.sum() * 1e3:8.2f} ms   "
            f"median {np.median(times) * 1e6:8.1f} us   "
            f"max {times.max() * 1e6:8.1f} us"
        )
    if len(results) == 2:
        ratio = results["numpy"].sum() / results["numba"].sum()
        print(f"numba speedup over numpy: {ratio:.2f}x on total time")
    os.environ.pop("ROBUSTCOORD_BACKEND", None)
    return 0


if __name__ == "__main__":
    sys.exit(main())
