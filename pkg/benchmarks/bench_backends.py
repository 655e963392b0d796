#!/usr/bin/env python3
"""Compare the compiled profile kernel against the pure-Python fallback.

Runs the same sliding-window stream through both backends in subprocesses
(the backend is fixed at import time) and prints updates/second.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys

WORKER = r"""
import json, sys, time
from levelcover import cli, streams
from levelcover.core import BACKEND, Mode, VertexAttrs
from levelcover.formats import InstanceSpec

n, T, window, seed = json.loads(sys.argv[1])
ops = streams.generate("sliding-window", seed, n=n, T=T, window=window)
spec = InstanceSpec()
spec.mode = Mode.CAPACITATED
spec.beta = 2.43
spec.epsilon = 0.1
spec.budget = n
spec.vertices = [VertexAttrs(i, 1.0 + (i % 7) * 0.25, 1 + i % 4) for i in range(n)]
driver = cli.build_driver(spec)
start = time.perf_counter()
result = cli.run_ops(driver, ops, verify="none")
elapsed = time.perf_counter() - start
state = driver.state
print(json.dumps({
    "backend": BACKEND,
    "updates": result.updates,
    "seconds": elapsed,
    "updates_per_sec": result.updates / elapsed,
    "touched": state.touched_total,
    "wall_ops": state._ops,
    "final_report": None,
}))
"""


def run_backend(backend, args):
    env = dict(os.environ, LEVELCOVER_BACKEND=backend)
    payload = json.dumps([args.n, args.T, args.window, args.seed])
    proc = subprocess.run(
        [sys.executable, "-c", WORKER, payload],
        env=env, capture_output=True, text=True, check=True)
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=1000)
    parser.add_argument("-T", type=int, default=50000)
    parser.add_argument("--window", type=int, default=500)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    results = {}
    for backend in ("python", "cython"):
        try:
            results[backend] = run_backend(backend, args)
        except subprocess.CalledProcessError as exc:
            print("%s backend failed:\n%s" % (backend, exc.stderr), file=sys.stderr)
    for backend, res in results.items():
        print("%-7s %8d updates  %6.2f s  %9.0f updates/s  (touched %d, ops %d)"
              % (backend, res["updates"], res["seconds"],
                 res["updates_per_sec"], res["touched"], res["wall_ops"]))
    if len(results) == 2:
        speedup = results["cython"]["updates_per_sec"] / results["python"]["updates_per_sec"]
        print("compiled kernel speedup: %.2fx" % speedup)
        if results["cython"]["touched"] != results["python"]["touched"]:
            print("WARNING: backends disagree on touched-edge counts", file=sys.stderr)
            return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
