"""Group structure in exponential coordinates.

The product is the truncated Baker-Campbell-Hausdorff series evaluated through
the Dynkin formula; the rational coefficient table is precomputed through
total degree 6, which leaves headroom over the shipped algebras (class <= 3).
Matrix representations act purely as test oracles: exponential coordinates
are the canonical group-element encoding everywhere else.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from . import linalg
from .algebra import NilpotentLieAlgebra, PreconditionError, AlgebraError
from .linalg import Mat, Vec, ZERO

MAX_BCH_DEGREE = 6


@lru_cache(maxsize=1)
def dynkin_table(max_degree: int = MAX_BCH_DEGREE) -> dict[int, tuple[tuple[Fraction, tuple[int, ...]], ...]]:
    """Dynkin-series terms grouped by total degree.

    Each term is (coefficient, word) where the word is a tuple over {0, 1}
    (0 = first argument, 1 = second) and stands for the right-nested bracket
    [w_0, [w_1, [... , w_{k-1}] ...]].  Words whose nested bracket vanishes
    identically (repeated trailing letter) are dropped.
    """
    by_degree: dict[int, dict[tuple[int, ...], Fraction]] = {d: {} for d in range(1, max_degree + 1)}

    def blocks(remaining: int, acc: list, m: int, out: list):
        if remaining == 0:
            if acc:
                out.append((list(acc), m))
            return
        for p in range(remaining + 1):
            for q in range(remaining - p + 1):
                if p == 0 and q == 0:
                    continue
                acc.append((p, q))
                blocks(remaining - p - q, acc, m + 1, out)
                acc.pop()

    for degree in range(1, max_degree + 1):
        seqs: list = []
        blocks(degree, [], 0, seqs)
        for seq, m in seqs:
            denom = degree
            word: list[int] = []
            for p, q in seq:
                denom *= factorial(p) * factorial(q)
                word.extend([0] * p + [1] * q)
            coeff = Fraction((-1) ** (m - 1), m * denom)
            w = tuple(word)
            if len(w) >= 2 and w[-1] == w[-2]:
                continue  # nested bracket ends in [a, a] = 0
            by_degree[degree][w] = by_degree[degree].get(w, ZERO) + coeff
    return {
        d: tuple((c, w) for w, c in sorted(terms.items()) if c != 0)
        for d, terms in by_degree.items()
    }


def bch_term(alg: NilpotentLieAlgebra, x: Vec, y: Vec, degree: int) -> Vec:
    """The degree-j homogeneous part b_j(x, y) of the BCH series (j >= 2)."""
    out = linalg.zeros(alg.dim)
    args = (x, y)
    for coeff, word in dynkin_table()[degree]:
        v = args[word[-1]]
        for letter in word[-2::-1]:
            v = alg.bracket(args[letter], v)
        if not linalg.is_zero_vec(v):
            out = linalg.vadd(out, linalg.vscale(coeff, v))
    return out


def bch(alg: NilpotentLieAlgebra, x: Vec, y: Vec) -> Vec:
    """x * y = x + y + sum_{j>=2} b_j(x, y), truncated at the nilpotency class."""
    cls = alg.nilpotency_class()
    if cls > MAX_BCH_DEGREE:
        raise PreconditionError(
            f"nilpotency class {cls} exceeds the coefficient table depth {MAX_BCH_DEGREE}"
        )
    out = linalg.vadd(x, y)
    for degree in range(2, cls + 1):
        out = linalg.vadd(out, bch_term(alg, x, y, degree))
    return out


def group_inverse(x: Vec) -> Vec:
    return tuple(-a for a in x)


@dataclass(frozen=True)
class GroupElement:
    """Group element in exponential coordinates (log g as a vector of g)."""

    algebra: NilpotentLieAlgebra
    log_coords: Vec

    @classmethod
    def identity(cls, alg: NilpotentLieAlgebra) -> "GroupElement":
        return cls(alg, linalg.zeros(alg.dim))

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.algebra is not other.algebra:
            raise PreconditionError("elements of different groups")
        return GroupElement(self.algebra, bch(self.algebra, self.log_coords, other.log_coords))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.algebra, group_inverse(self.log_coords))


class MatrixRep:
    """Strictly-upper-triangular matrix model of an algebra, used as an oracle.

    The basis assignment must be a Lie algebra homomorphism (bracket to
    commutator, checked exactly on load) and faithful on the shipped algebras.
    """

    def __init__(self, alg: NilpotentLieAlgebra, size: int, images: dict[str, Mat]):
        self.algebra = alg
        self.size = size
        self.images = tuple(images[lab] for lab in alg.labels)
        for m in self.images:
            if len(m) != size or any(len(r) != size for r in m):
                raise AlgebraError("matrix image has wrong shape")
            for i in range(size):
                for j in range(0, i + 1):
                    if m[i][j] != 0:
                        raise AlgebraError("matrix image is not strictly upper triangular")
        self._check_homomorphism()
        flat = [tuple(e for row in img for e in row) for img in self.images]
        if linalg.rank(flat) != alg.dim:
            raise AlgebraError("matrix representation is not faithful")

    def _check_homomorphism(self):
        alg = self.algebra
        for i in range(alg.dim):
            for j in range(i + 1, alg.dim):
                lhs = self.matrix_of(alg.basis_bracket(i, j))
                a, b = self.images[i], self.images[j]
                rhs = _mat_sub(linalg.mat_mul(a, b), linalg.mat_mul(b, a))
                if lhs != rhs:
                    raise AlgebraError(
                        f"matrix assignment is not a homomorphism on pair ({i},{j})"
                    )

    def matrix_of(self, x: Vec) -> Mat:
        out = tuple((ZERO,) * self.size for _ in range(self.size))
        for coeff, img in zip(x, self.images):
            if coeff:
                out = tuple(
                    tuple(o + coeff * e for o, e in zip(orow, erow))
                    for orow, erow in zip(out, img)
                )
        return out

    def coords_of(self, m: Mat) -> Vec:
        """Solve matrix_of(x) = m; raises if m is outside the image."""
        cols = [tuple(entry for row in img for entry in row) for img in self.images]
        flat = tuple(entry for row in m for entry in row)
        sol = linalg.solve(linalg.transpose(linalg.mat(cols)), flat)
        if sol is None or self.matrix_of(sol) != m:
            raise AlgebraError("matrix is not in the image of the representation")
        return sol

    def exp(self, x: Vec) -> Mat:
        return linalg.matrix_exp_nilpotent(self.matrix_of(x))

    def log(self, m: Mat) -> Vec:
        return self.coords_of(linalg.matrix_log_unipotent(m))

    def group_product(self, x: Vec, y: Vec) -> Vec:
        """log(exp(x) . exp(y)) computed entirely inside the matrix model."""
        return self.log(linalg.mat_mul(self.exp(x), self.exp(y)))

    @classmethod
    def from_dict(cls, alg: NilpotentLieAlgebra, data: dict) -> "MatrixRep":
        size = data["dim"]
        images = {
            lab: linalg.mat([[linalg.parse_rational(e) for e in row] for row in rows])
            for lab, rows in data["images"].items()
        }
        missing = set(alg.labels) - set(images)
        if missing:
            raise AlgebraError(f"representation misses images for {sorted(missing)}")
        return cls(alg, size, images)

    @classmethod
    def from_file(cls, alg: NilpotentLieAlgebra, path) -> "MatrixRep":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(alg, json.load(fh))


def _mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def universal_scalar(alg: NilpotentLieAlgebra, search_limit: int = 10000) -> int:
    """Least a >= 1 such that a^(j-1) * b_j(X_i, X_k) is integral for all basis
    pairs and all 2 <= j <= class.  The rescaled lattice a*Z^n is then closed
    under every BCH term, hence exponentiates to a group.
    """
    for (i, j), terms in alg.c.items():
        for v in terms.values():
            if Fraction(v).denominator != 1:
                raise PreconditionError(
                    "structure constants must be integral; rescale the basis first"
                )
    cls = alg.nilpotency_class()
    pair_terms: list[tuple[int, Vec]] = []
    for i in range(alg.dim):
        xi = alg.basis_vector(i)
        for j in range(alg.dim):
            if i == j:
                continue
            xj = alg.basis_vector(j)
            for deg in range(2, cls + 1):
                t = bch_term(alg, xi, xj, deg)
                if not linalg.is_zero_vec(t):
                    pair_terms.append((deg, t))
    for a in range(1, search_limit + 1):
        ok = True
        for deg, t in pair_terms:
            scale = Fraction(a) ** (deg - 1)
            if any((scale * coord).denominator != 1 for coord in t):
                ok = False
                break
        if ok:
            return a
    raise AlgebraError(f"no universal scalar found up to {search_limit}")
