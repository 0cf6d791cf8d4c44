"""Pure numpy fallbacks for the compiled kernels, same contracts as _core."""

import numpy as np


def pair_sum_power(values, weights, out_i, out_j, in_i, in_j, p):
    n1, n2 = values.shape
    inner = values[in_i, in_j]
    acc = 0.0
    for oi, oj in zip(out_i, out_j):
        d = np.abs(inner - values[oi, oj])
        w = weights[(in_i - oi) % n1, (in_j - oj) % n2]
        if p == 2.0:
            acc += float(np.dot(d * d, w))
        elif p == 3.0:
            acc += float(np.dot(d * d * d, w))
        else:
            acc += float(np.dot(d**p, w))
    return acc


def interval_sup_ratios(pts, dx, t, p, starts, lengths):
    out = np.zeros(len(starts), dtype=np.float64)
    for c, (s, w) in enumerate(zip(starts, lengths)):
        block = pts[s : s + w]
        gaps = np.arange(1, w)
        best = 0.0
        for d in gaps:
            num = np.linalg.norm(block[d:] - block[:-d], axis=1) ** p
            best = max(best, float(num.max()) / (d * dx) ** t)
        out[c] = best
    return out
