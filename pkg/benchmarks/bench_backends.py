#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-numpy fallback.

Micro-benchmarks call both kernel modules directly; the end-to-end shot
workloads run in subprocesses so each one selects its backend at import
(MAJEX_PURE_PYTHON=1 forces the fallback). Example:

    python benchmarks/bench_backends.py --shots 24576
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

WORKLOAD = r"""
import json, time
import majex.backend as backend
from majex.compiler import assign_qubits, build_compiled, decode_exchange_table
from majex.device import example_device
from majex.exchange import correlation, ideal_circuit, postselect, run_shots
from majex.noise import NoiseConfig

shots = {shots}
out = {{"backend": backend.BACKEND_NAME}}

t0 = time.perf_counter()
table = postselect(run_shots(ideal_circuit(), shots, seed=1))
out["noiseless_s"] = time.perf_counter() - t0
out["noiseless_C"] = correlation(table)

dev = example_device()
circ = build_compiled(dev, assign_qubits(dev))
noise = NoiseConfig.from_device(dev)
t0 = time.perf_counter()
table = postselect(decode_exchange_table(run_shots(circ, shots, noise=noise, seed=1)))
out["noisy_s"] = time.perf_counter() - t0
out["noisy_C"] = correlation(table)
print(json.dumps(out))
"""


def run_workload(shots: int, pure_python: bool) -> dict:
    env = dict(os.environ)
    env["MAJEX_PURE_PYTHON"] = "1" if pure_python else "0"
    proc = subprocess.run([sys.executable, "-c", WORKLOAD.format(shots=shots)],
                          env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout)


def micro_benchmarks(reps: int = 200, num_qubits: int = 18) -> list[tuple[str, float, float]]:
    from majex import _kernel_py
    try:
        from majex import _kernel
    except ImportError:
        return []
    rng = np.random.default_rng(0)
    dim = 1 << num_qubits
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    amps = np.ascontiguousarray(amps / np.linalg.norm(amps))
    s = 1 / np.sqrt(2)

    def time_it(fn) -> float:
        t0 = time.perf_counter()
        for _ in range(reps):
            fn()
        return (time.perf_counter() - t0) / reps

    rows = []
    for name, call in [
        ("apply_1q", lambda k: k.apply_1q(amps, s, s, s, -s, 7)),
        ("apply_cx", lambda k: k.apply_cx(amps, 3, 11)),
        ("prob_one", lambda k: k.prob_one(amps, 5)),
    ]:
        t_c = time_it(lambda: call(_kernel))
        t_p = time_it(lambda: call(_kernel_py))
        rows.append((f"{name} ({num_qubits}q)", t_c, t_p))
    return rows


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--shots", type=int, default=24576)
    args = parser.parse_args()

    print(f"== shot workloads ({args.shots} shots each) ==")
    results = {}
    for pure in (False, True):
        res = run_workload(args.shots, pure)
        results[res["backend"]] = res
        print(f"  backend={res['backend']:<7} noiseless {res['noiseless_s']:.2f}s "
              f"(C={res['noiseless_C']:.3f})   noisy {res['noisy_s']:.2f}s "
              f"(C={res['noisy_C']:.3f})")
    if {"cython", "python"} <= set(results):
        for key in ("noiseless_s", "noisy_s"):
            ratio = results["python"][key] / results["cython"][key]
            print(f"  speedup {key.removesuffix('_s')}: {ratio:.1f}x")
        if results["python"]["noiseless_C"] != 1.0:
            print("  WARNING: fallback backend broke the noiseless invariant")

    rows = micro_benchmarks()
    if rows:
        print("== kernel micro-benchmarks (per call) ==")
        for name, t_c, t_p in rows:
            print(f"  {name:<16} cython {t_c * 1e3:7.3f} ms   "
                  f"python {t_p * 1e3:7.3f} ms   ({t_p / t_c:.1f}x)")
    else:
        print("compiled kernel not built; micro-benchmarks skipped")
    return 0


if __name__ == "__main__":
    sys.exit(main())
