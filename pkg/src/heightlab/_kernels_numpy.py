"""Pure-numpy fallback for the point-enumeration kernels.

Same contracts as heightlab._kernels_numba; selected when numba is missing or
HEIGHTLAB_BACKEND=numpy.  Vectorizes over the trailing coordinates and keeps
the outer loop in Python.
"""

import math

import numpy as np


def count_p1_range(t, w_lo, w_hi):
    if t < 1:
        return 0
    a = np.arange(1, t + 1, dtype=np.int64)
    total = 1 if w_lo <= 1 <= w_hi else 0
    for w in range(w_lo, w_hi + 1):
        total += 2 * int(np.count_nonzero(np.gcd(np.int64(w), a) == 1))
    return total


def count_p2_range(t, w_lo, w_hi):
    if t < 1:
        return 0
    ax = np.abs(np.arange(-t, t + 1, dtype=np.int64))
    total = 0
    for w in range(w_lo, w_hi + 1):
        g1 = np.gcd(np.int64(w), ax)
        grid = np.gcd.outer(g1, ax)
        total += int(np.count_nonzero(grid == 1))
    return total


def count_p3_range(t, w_lo, w_hi):
    if t < 1:
        return 0
    ax = np.abs(np.arange(-t, t + 1, dtype=np.int64))
    total = 0
    for w in range(w_lo, w_hi + 1):
        g1 = np.gcd(np.int64(w), ax)
        for g2row in np.gcd.outer(g1, ax):
            total += int(np.count_nonzero(np.gcd.outer(g2row, ax) == 1))
    return total


def count_blowup_range(bound, w_lo, w_hi):
    cap = math.isqrt(bound)
    x = np.arange(-cap, cap + 1, dtype=np.int64)
    ax = np.abs(x)
    total = 0
    for w in range(w_lo, w_hi + 1):
        g = np.gcd(np.int64(w), ax)
        m2 = np.maximum(np.int64(w), ax)
        ok = m2 * m2 * m2 <= bound * g
        for gi, m2i in zip(g[ok], m2[ok]):
            gi = int(gi)
            m2i = int(m2i)
            ymax = math.isqrt(bound * gi // m2i)
            while ymax * ymax * m2i > bound * gi:
                ymax -= 1
            y = np.arange(0, ymax + 1, dtype=np.int64)
            my = np.maximum(np.int64(m2i), y)
            good = (my * my * m2i <= bound * gi) & (np.gcd(np.int64(gi), y) == 1)
            c = int(np.count_nonzero(good))
            if good[0]:
                total += 2 * c - 1  # y = 0 counted once
            else:
                total += 2 * c
    return total
