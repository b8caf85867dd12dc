"""Time the numba kernels against the numpy fallback on the same inputs.

    python3 benchmarks/bench_backends.py [--n 2000] [--reps 200]

Also runs a small ensemble end to end under each UNCOVER_BACKEND setting
(in a subprocess, since the flag is read at import) and checks the JSON is
identical.
"""
import argparse
import os
import subprocess
import sys
import time

import numpy as np

from uncover._kernels import _numba as nb
from uncover._kernels import _numpy as npk
from uncover.generators import ModelSpec, generate

ENSEMBLE_SNIPPET = """
import time
from uncover.ensemble import ExperimentSpec, run_ensemble
from uncover.generators import ModelSpec
spec = ExperimentSpec(ModelSpec('labelled_tree', {n}), {reps}, (0.25, 0.5, 0.75), 'ComponentsDiscrete', seed=1)
t0 = time.perf_counter()
out = run_ensemble(spec, workers=1).to_json()
print(time.perf_counter() - t0)
print(out)
"""


def timeit(fn, *args, reps=5):
    fn(*args)  # warm-up / JIT compile
    best = float("inf")
    for _ in range(reps):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--reps", type=int, default=200)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    n = args.n
    cases = {
        "tree": generate(ModelSpec("labelled_tree", n), rng),
        "gnp": generate(ModelSpec("gnp", n, p=8 / n), rng),
        "4-regular": generate(ModelSpec("config", n, degrees=(4,) * n), rng),
    }
    order = rng.permutation(n).astype(np.int64)
    print(f"{'kernel':<18}{'graph':<12}{'numba ms':>10}{'numpy ms':>10}{'speedup':>9}")
    for gname, g in cases.items():
        for kname in ("edge_counts", "component_counts", "triangle_counts"):
            a = timeit(getattr(nb, kname), g.indptr, g.indices, order)
            b = timeit(getattr(npk, kname), g.indptr, g.indices, order)
            print(f"{kname:<18}{gname:<12}{a * 1e3:>10.3f}{b * 1e3:>10.3f}{b / a:>9.1f}")
    seq = rng.integers(0, n, n - 2).astype(np.int64)
    a, b = timeit(nb.prufer_decode, seq, n), timeit(npk.prufer_decode, seq, n)
    print(f"{'prufer_decode':<18}{'-':<12}{a * 1e3:>10.3f}{b * 1e3:>10.3f}{b / a:>9.1f}")

    outs = {}
    for backend in ("numba", "numpy"):
        env = dict(os.environ, UNCOVER_BACKEND=backend)
        res = subprocess.run([sys.executable, "-c", ENSEMBLE_SNIPPET.format(n=n, reps=args.reps)], env=env,
                             capture_output=True, text=True, check=True)
        secs, _, payload = res.stdout.partition("\n")
        outs[backend] = payload
        print(f"ensemble ({args.reps} reps, n={n}) backend={backend}: {float(secs):.2f}s")
    print("identical output:", outs["numba"] == outs["numpy"])


if __name__ == "__main__":
    main()
