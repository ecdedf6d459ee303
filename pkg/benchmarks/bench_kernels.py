"""Time the compiled kernels against the interpreted fallback.

Each mode runs in its own interpreter because CLIQUEX_DISABLE_JIT is read at
import time.  Compilation is excluded by a warm-up call.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
import numpy as np
from cliquex import _kernels as K
from cliquex.sampling import maximal_hypercliques, sample_hypergraph

repeat = int(sys.argv[1])
rows = [K.sample_graph_bits(40, 0.5, np.uint64(s)) for s in range(50)]
hyper = [sample_hypergraph(14, 3, 0.6, s) for s in range(5)]

cases = {
    "sample G(200, 0.5) x20": lambda: [K.sample_graph_matrix(200, 0.5, np.uint64(s)) for s in range(20)],
    "Bron-Kerbosch G(40, 0.5) x50": lambda: [K.bk_census(r, 40, 10**7, False, np.zeros(1, np.uint64)) for r in rows],
    "MC n=10 p=0.5 T=2000": lambda: K.mc_graph_totals(10, 0.5, np.uint64(7), 0, 2000, 10**7),
    "hyper census n=14 r=3 x5": lambda: [maximal_hypercliques(h) for h in hyper],
    "log terms n=10^6": lambda: K.graph_log_terms(10**6, float(np.log(0.5))),
}
out = {}
for name, fn in cases.items():
    fn()
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    out[name] = best
json.dump(out, sys.stdout)
"""


def run(disable_jit: bool, repeat: int) -> dict:
    env = dict(os.environ)
    env.pop("CLIQUEX_DISABLE_JIT", None)
    if disable_jit:
        env["CLIQUEX_DISABLE_JIT"] = "1"
    proc = subprocess.run([sys.executable, "-c", WORKER, str(repeat)], capture_output=True, text=True, env=env, check=True)
    return json.loads(proc.stdout)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    jit, fallback = run(False, args.repeat), run(True, args.repeat)
    width = max(map(len, jit))
    print(f"{'kernel':<{width}}  {'numba (s)':>10}  {'fallback (s)':>12}  {'speedup':>8}")
    for name in jit:
        print(f"{name:<{width}}  {jit[name]:>10.4f}  {fallback[name]:>12.4f}  {fallback[name] / jit[name]:>7.1f}x")


if __name__ == "__main__":
    main()
