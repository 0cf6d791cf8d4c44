"""Timing comparison of the compiled kernels against the numpy fallbacks.

Run directly:

    python3 benchmarks/bench_kernels.py

Both implementations are imported side by side (the package-level selection
is bypassed), timed on the two hot loops, and checked against each other so
a speedup never hides a numerical divergence.
"""

from __future__ import annotations

import time

import numpy as np

from fracsob._kernels import _fallback

try:
    from fracsob._kernels import _core
except ImportError:
    _core = None


def _time(fn, *args, repeats: int = 3) -> tuple[float, float]:
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_pair_sum(n: int, n_outer: int, seed: int = 7) -> dict:
    rng = np.random.default_rng(seed)
    values = rng.normal(size=(n, n))
    weights = rng.uniform(0.1, 1.0, size=(n, n))
    out_i = rng.integers(0, n, size=n_outer).astype(np.intp)
    out_j = rng.integers(0, n, size=n_outer).astype(np.intp)
    ii, jj = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    in_i = ii.ravel().astype(np.intp)
    in_j = jj.ravel().astype(np.intp)
    args = (values, weights, out_i, out_j, in_i, in_j, 3.0)

    t_py, r_py = _time(_fallback.pair_sum_power, *args)
    row = {"kernel": "pair_sum_power", "n": n, "outer": n_outer,
           "fallback_s": t_py}
    if _core is not None:
        t_c, r_c = _time(_core.pair_sum_power, *args)
        rel = abs(r_c - r_py) / max(abs(r_py), 1e-300)
        row.update(compiled_s=t_c, speedup=t_py / t_c, rel_diff=rel)
    return row


def bench_interval_sup(n_pts: int, n_intervals: int, seed: int = 11) -> dict:
    rng = np.random.default_rng(seed)
    steps = rng.normal(size=(n_pts, 2)) * 0.01
    pts = np.cumsum(steps, axis=0)
    width = max(n_pts // n_intervals, 4)
    starts = np.arange(0, n_pts - width, width).astype(np.intp)
    lengths = np.full(len(starts), width, dtype=np.intp)
    args = (pts, 1.0 / n_pts, 0.4, 2.0, starts, lengths)

    t_py, r_py = _time(_fallback.interval_sup_ratios, *args)
    row = {"kernel": "interval_sup_ratios", "pts": n_pts,
           "intervals": len(starts), "fallback_s": t_py}
    if _core is not None:
        t_c, r_c = _time(_core.interval_sup_ratios, *args)
        rel = float(np.max(np.abs(r_c - r_py) / np.maximum(np.abs(r_py), 1e-300)))
        row.update(compiled_s=t_c, speedup=t_py / t_c, rel_diff=rel)
    return row


def main() -> None:
    if _core is None:
        print("compiled extension not importable; timing fallback only")
    rows = [
        bench_pair_sum(64, 512),
        bench_pair_sum(128, 1024),
        bench_interval_sup(4096, 64),
        bench_interval_sup(16384, 128),
    ]
    for row in rows:
        parts = [f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}"
                 for k, v in row.items()]
        print("  ".join(parts))
    if _core is not None:
        worst = max(row["rel_diff"] for row in rows)
        print(f"max relative difference compiled vs fallback: {worst:.3e}")
        if worst > 1e-9:
            raise SystemExit("kernel implementations disagree beyond 1e-9")


if __name__ == "__main__":
    main()
