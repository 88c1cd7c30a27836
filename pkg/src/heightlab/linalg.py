"""Exact linear algebra over the rationals.

Vectors are tuples of Fraction, matrices are tuples of row tuples.  Everything
here is pure and allocation-light; dimensions stay small (n <= 6 for the
shipped algebras), so no attempt is made at asymptotic cleverness.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def unit(n: int, i: int) -> Vec:
    return tuple(ONE if j == i else ZERO for j in range(n))


def identity(n: int) -> Mat:
    return tuple(unit(n, i) for i in range(n))


def vadd(x: Vec, y: Vec) -> Vec:
    return tuple(a + b for a, b in zip(x, y, strict=True))


def vsub(x: Vec, y: Vec) -> Vec:
    return tuple(a - b for a, b in zip(x, y, strict=True))


def vscale(c, x: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in x)


def dot(x: Vec, y: Vec) -> Fraction:
    return sum((a * b for a, b in zip(x, y, strict=True)), ZERO)


def mat_vec(m: Mat, x: Vec) -> Vec:
    return tuple(dot(row, x) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Mat) -> Mat:
    if not m:
        return ()
    return tuple(zip(*m, strict=True))


def is_zero_vec(x: Vec) -> bool:
    return all(a == 0 for a in x)


def is_zero_mat(m: Mat) -> bool:
    return all(is_zero_vec(r) for r in m)


def rref(m: Sequence[Sequence[Fraction]]) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form; returns (rows, pivot column indices).

    Zero rows are dropped, pivots are normalized to 1.
    """
    rows = [list(r) for r in m]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [a / pv for a in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    out = tuple(tuple(row) for row in rows[: len(pivots)])
    return out, tuple(pivots)


def rank(m: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(m)[0])


def nullspace(m: Sequence[Sequence[Fraction]]) -> tuple[Vec, ...]:
    """Basis of the right kernel {x : M x = 0}."""
    if not m:
        return ()
    ncols = len(m[0])
    red, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [ZERO] * ncols
        x[fc] = ONE
        for r, pc in enumerate(pivots):
            x[pc] = -red[r][fc]
        basis.append(tuple(x))
    return tuple(basis)


def left_nullspace(m: Sequence[Sequence[Fraction]]) -> tuple[Vec, ...]:
    return nullspace(transpose(mat(m)))


def solve(m: Sequence[Sequence[Fraction]], b: Vec) -> Vec | None:
    """One solution of M x = b, or None if inconsistent."""
    if not m:
        return () if is_zero_vec(b) else None
    ncols = len(m[0])
    aug = [list(r) + [bb] for r, bb in zip(m, b, strict=True)]
    red, pivots = rref(aug)
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None
        x[pc] = red[r][ncols]
    return tuple(x)


def row_space(m: Sequence[Sequence[Fraction]]) -> Mat:
    """Canonical (rref) basis of the row space."""
    return rref(m)[0]


def in_span(basis: Mat, x: Vec) -> bool:
    """Exact membership of x in the row space of `basis`."""
    if is_zero_vec(x):
        return True
    if not basis:
        return False
    return rank(tuple(basis) + (x,)) == len(basis)


def span_union(*parts: Mat) -> Mat:
    rows: list[Vec] = []
    for p in parts:
        rows.extend(p)
    return row_space(rows)


def matrix_exp_nilpotent(a: Mat) -> Mat:
    """exp of a nilpotent matrix via the (finite) power series."""
    n = len(a)
    out = identity(n)
    term = identity(n)
    k = 1
    while True:
        term = mat_mul(term, a)
        if is_zero_mat(term):
            return out
        out = tuple(
            tuple(o + t / _factorial(k) for o, t in zip(orow, trow))
            for orow, trow in zip(out, term)
        )
        k += 1
        if k > n + 1:
            raise ValueError("matrix is not nilpotent")


def matrix_log_unipotent(m: Mat) -> Mat:
    """log of a unipotent matrix via the (finite) series on N = M - I."""
    n = len(m)
    nil = tuple(
        tuple(e - (ONE if i == j else ZERO) for j, e in enumerate(row))
        for i, row in enumerate(m)
    )
    out = tuple((ZERO,) * n for _ in range(n))
    term = identity(n)
    k = 1
    while True:
        term = mat_mul(term, nil)
        if is_zero_mat(term):
            return out
        sign = ONE if k % 2 == 1 else -ONE
        out = tuple(
            tuple(o + sign * t / k for o, t in zip(orow, trow))
            for orow, trow in zip(out, term)
        )
        k += 1
        if k > n + 1:
            raise ValueError("matrix is not unipotent")


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out


def parse_rational(s) -> Fraction:
    """Rationals arrive as strings "p/q" (or ints) in all shipped file formats."""
    if isinstance(s, str):
        return Fraction(s)
    if isinstance(s, int):
        return Fraction(s)
    raise ValueError(f"expected exact rational, got {type(s).__name__}: {s!r}")


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
