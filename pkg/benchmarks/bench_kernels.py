#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Two views: end-to-end trial engines (variate generation included, shared by
both backends) and kernel-only arithmetic on pre-drawn inputs, where the
backend difference is isolated. The numpy path runs in a subprocess with
RISCOMP_NUMBA=0. Also reports the agent's per-step training cost.
"""

import json
import os
import subprocess
import sys
import tempfile
import time
from pathlib import Path

import numpy as np

from riscomp import kernels
from riscomp.channel import substream
from riscomp.energy import simulate_network
from riscomp.montecarlo import run_trials
from riscomp.scenarios import CoordinatedScenario, MultiCellScenario, tiny_aerial_scenario

REPEATS = 3

_BODY = r"""
import json, sys, time
import numpy as np
from riscomp import kernels
from riscomp.channel import substream
from riscomp.energy import simulate_network
from riscomp.montecarlo import run_trials
from riscomp.scenarios import CoordinatedScenario, MultiCellScenario


def bench(REPEATS):
    out = {}
    scn = CoordinatedScenario(p_t_dbm=-10.0)
    run_trials(scn, 1000, seed=0)  # warm caches / JIT
    t0 = time.perf_counter()
    for _ in range(REPEATS):
        run_trials(scn, 200_000, seed=0)
    out["trials 2e5 (end-to-end)"] = (time.perf_counter() - t0) / REPEATS

    mscn = MultiCellScenario(n_trials=10_000)
    simulate_network(mscn, "ec", n=1000, seed=0)
    t0 = time.perf_counter()
    for _ in range(REPEATS):
        simulate_network(mscn, "ec", n=10_000, seed=0)
    out["multicell 1e4 (end-to-end)"] = (time.perf_counter() - t0) / REPEATS

    rng = substream(0, 0)
    n, cells, k = 4096, 6, 70
    ed = rng.standard_normal((2, n, cells))
    casc = 0.1 * rng.standard_normal((2, n, cells, k))
    phi = rng.uniform(-np.pi, np.pi, (n, cells, k))
    cg = rng.gamma(1.0, 1.0, (n, cells, cells))
    coop = np.array([1, 1, 1, 1, 0, 0], np.uint8)
    mode = np.array([2, 2, 2, 2, 3, 3], np.uint8)
    args = (ed[0], ed[1], casc[0], casc[1], np.cos(phi), np.sin(phi), cg,
            coop, mode, 0.7, 1e-3, 4e-14)
    kernels.multicell_edge_sinr(*args)
    t0 = time.perf_counter()
    for _ in range(10 * REPEATS):
        kernels.multicell_edge_sinr(*args)
    out["multicell kernel only"] = (time.perf_counter() - t0) / (10 * REPEATS)

    z = rng.gamma(1.5, 1.0, (kernels.N_Z_ROWS, 3, n))
    x = rng.gamma(1.0, 1.0, (kernels.N_X_ROWS, n))
    amp = rng.uniform(0, 30, kernels.N_Z_ROWS)
    kernels.coordinated_sinr(z, x, amp, 0.3, 0.3, 0.7, 100.0)
    t0 = time.perf_counter()
    for _ in range(30 * REPEATS):
        kernels.coordinated_sinr(z, x, amp, 0.3, 0.3, 0.7, 100.0)
    out["coordinated kernel only"] = (time.perf_counter() - t0) / (30 * REPEATS)
    return out
"""

_CHILD = _BODY + r"""
assert kernels.backend() == "numpy"
print(json.dumps(bench(int(sys.argv[1]))))
"""


def _bench_training_step() -> float:
    from riscomp.moppo import TrainConfig, train

    scn = tiny_aerial_scenario(k_elements=4, t_slots=40)
    cfg = TrainConfig(episodes=20, epochs=10, rollout=4, episodes_per_update=4)
    t0 = time.perf_counter()
    train(scn, cfg, seed=0)
    dt = time.perf_counter() - t0
    return dt / (cfg.episodes * scn.t_slots) * 1e6


def main() -> int:
    namespace: dict = {}
    exec(_BODY, namespace)  # same workloads in-process
    native = namespace["bench"](REPEATS)
    native_backend = kernels.backend()

    rows = [("workload", native_backend, "numpy", "speedup")]
    if native_backend == "numba":
        with tempfile.TemporaryDirectory() as tmp:
            script = Path(tmp) / "child.py"
            script.write_text(_CHILD)
            env = dict(os.environ, RISCOMP_NUMBA="0")
            proc = subprocess.run(
                [sys.executable, str(script), str(REPEATS)],
                env=env, capture_output=True, text=True, check=True,
            )
        fallback = json.loads(proc.stdout.strip().splitlines()[-1])
        for key in native:
            rows.append(
                (key, f"{native[key] * 1e3:8.2f} ms",
                 f"{fallback[key] * 1e3:8.2f} ms",
                 f"{fallback[key] / native[key]:5.2f}x")
            )
    else:
        for key in native:
            rows.append((key, f"{native[key] * 1e3:8.2f} ms", "-", "-"))

    widths = [max(len(str(r[i])) for r in rows) for i in range(4)]
    for r in rows:
        print("  ".join(str(v).ljust(w) for v, w in zip(r, widths)))
    print(f"agent training step (tiny scenario): {_bench_training_step():.0f} us/step")
    return 0


if __name__ == "__main__":
    sys.exit(main())
