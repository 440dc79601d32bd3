"""Time the numba kernels against the pure-Python/numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--json out.json]

Both backends are loaded side by side, so the environment flag
ZEROONE_NO_NUMBA (which only chooses the default) does not matter here.
Results are cross-checked: a mismatch between backends aborts the run.
"""
from __future__ import annotations

import argparse
import json
import statistics
import time

import numpy as np

from zeroone import _kernels
from zeroone.graph import RngSpec, sample_gnp

CASES = [
    # name, kernel, n, p, extra args
    ("gnp_upper", "gnp_upper", 1000, 0.5, None),
    ("is_connected", "is_connected", 400, 0.02, ()),
    ("is_bipartite", "is_bipartite", 400, 0.02, ()),
    ("dsatur_greedy", "dsatur_greedy", 200, 0.5, ()),
    ("k_colorable(4)", "k_colorable", 16, 0.5, (4, 10**7)),
    ("hamiltonian", "hamiltonian", 14, 0.3, (10**7,)),
]


def run(fn, args, repeat):
    out = fn(*args)  # warm-up, includes compilation for the JIT path
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t)
    return out, statistics.median(times)


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--json")
    a = ap.parse_args(argv)
    rows = []
    print(f"{'kernel':18} {'n':>5} {'python s':>11} {'numba s':>11} {'speedup':>8}")
    for name, kernel, n, p, extra in CASES:
        if extra is None:
            draws = RngSpec(1).generator().random(n * (n - 1) // 2)
            args = (draws, n, p)
        else:
            args = (np.ascontiguousarray(sample_gnp(n, p, RngSpec(1, n)).adj),) + extra
        r_py, t_py = run(getattr(_kernels.PY, kernel), args, a.repeat)
        r_jit, t_jit = run(getattr(_kernels.JIT, kernel), args, a.repeat)
        same = np.array_equal(r_py, r_jit) if isinstance(r_py, np.ndarray) else r_py == r_jit
        if not same:
            raise SystemExit(f"{name}: backends disagree ({r_py!r} vs {r_jit!r})")
        rows.append({"kernel": name, "n": n, "python_s": t_py, "numba_s": t_jit,
                     "speedup": t_py / t_jit if t_jit else float("inf")})
        print(f"{name:18} {n:5d} {t_py:11.6f} {t_jit:11.6f} {rows[-1]['speedup']:8.1f}")
    if a.json:
        with open(a.json, "w") as fh:
            json.dump({"backend_default": _kernels.BACKEND, "rows": rows}, fh, indent=2)


if __name__ == "__main__":
    main()
