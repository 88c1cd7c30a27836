"""Numba kernels for the point-enumeration hot loops.

Each kernel counts primitive integer tuples in an exact height ball over a
range of first coordinates, so box partitions can run independently and their
counts add up deterministically.
"""

import numba as nb
import numpy as np


@nb.njit(nb.int64(nb.int64, nb.int64), cache=True, inline="always")
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@nb.njit(nb.int64(nb.int64, nb.int64, nb.int64), cache=True, parallel=True)
def count_p1_range(t, w_lo, w_hi):
    total = 0
    for w in nb.prange(w_lo, w_hi + 1):
        c = 0
        for a in range(1, t + 1):
            if _gcd(w, a) == 1:
                c += 1
        total += 2 * c
        if w == 1:
            total += 1  # a = 0 is primitive only alongside w = 1
    return total


@nb.njit(nb.int64(nb.int64, nb.int64, nb.int64), cache=True, parallel=True)
def count_p2_range(t, w_lo, w_hi):
    total = 0
    for w in nb.prange(w_lo, w_hi + 1):
        c = 0
        for x in range(-t, t + 1):
            g1 = _gcd(w, x if x >= 0 else -x)
            if g1 == 1:
                c += 2 * t + 1
                continue
            for y in range(-t, t + 1):
                if _gcd(g1, y if y >= 0 else -y) == 1:
                    c += 1
        total += c
    return total


@nb.njit(nb.int64(nb.int64, nb.int64, nb.int64), cache=True, parallel=True)
def count_p3_range(t, w_lo, w_hi):
    total = 0
    for w in nb.prange(w_lo, w_hi + 1):
        c = 0
        for x in range(-t, t + 1):
            g1 = _gcd(w, x if x >= 0 else -x)
            for y in range(-t, t + 1):
                g2 = _gcd(g1, y if y >= 0 else -y)
                if g2 == 1:
                    c += 2 * t + 1
                    continue
                for z in range(-t, t + 1):
                    if _gcd(g2, z if z >= 0 else -z) == 1:
                        c += 1
        total += c
    return total


@nb.njit(nb.int64(nb.int64, nb.int64, nb.int64), cache=True, parallel=True)
def count_blowup_range(bound, w_lo, w_hi):
    # H(w:x:y) = max(|w|,|x|,|y|)^2 * max(|w|,|x|) / gcd(w,x) <= bound,
    # tested as max(m2,|y|)^2 * m2 <= bound * g in exact integers.
    cap = int(np.sqrt(np.float64(bound))) + 2  # |coordinate| <= sqrt(bound)
    while cap * cap > bound:
        cap -= 1
    total = 0
    for w in nb.prange(w_lo, w_hi + 1):
        c = 0
        for x in range(-cap, cap + 1):
            ax = x if x >= 0 else -x
            g = _gcd(w, ax)
            m2 = w if w >= ax else ax
            if m2 * m2 * m2 > bound * g:
                continue
            ymax = int(np.sqrt(np.float64(bound * g) / np.float64(m2))) + 2
            while ymax * ymax * m2 > bound * g:
                ymax -= 1
            for y in range(0, ymax + 1):
                my = m2 if m2 >= y else y
                if my * my * m2 <= bound * g and _gcd(g, y) == 1:
                    c += 1 if y == 0 else 2
        total += c
    return total
