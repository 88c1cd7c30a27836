"""Exact structure theory of finite-dimensional nilpotent Lie algebras over Q.

Structure constants are stored sparsely for i < j only; antisymmetry is
synthesized on access.  Loading validates the Jacobi identity on all basis
triples and nilpotency (the ascending central series must reach the whole
algebra within dim steps).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import linalg
from .linalg import Mat, Vec, ZERO, ONE


class AlgebraError(ValueError):
    """Invalid algebra data: Jacobi failure, missing nilpotency, bad file."""


class PreconditionError(ValueError):
    """An operation was called outside its contract."""


class NilpotentLieAlgebra:
    """A nilpotent Lie algebra given by exact rational structure constants.

    `c[(i, j)][k]` holds the coefficient of X_k in [X_i, X_j] for i < j.
    Pairs absent from `c` bracket to zero.
    """

    def __init__(self, dim: int, labels: Sequence[str], c: dict):
        if dim <= 0:
            raise AlgebraError("dimension must be positive")
        if len(labels) != dim or len(set(labels)) != dim:
            raise AlgebraError("need dim distinct basis labels")
        self.dim = dim
        self.labels = tuple(labels)
        self.c = {}
        for (i, j), terms in c.items():
            if not (0 <= i < j < dim):
                raise AlgebraError(f"structure constant key ({i},{j}) out of range")
            clean = {k: Fraction(v) for k, v in terms.items() if v != 0}
            if clean:
                self.c[(i, j)] = clean
        self._check_jacobi()
        self._series = None
        self._check_nilpotent()

    # -- basic bracket machinery -------------------------------------------

    def basis_bracket(self, i: int, j: int) -> Vec:
        if i == j:
            return linalg.zeros(self.dim)
        sign = ONE
        if i > j:
            i, j, sign = j, i, -ONE
        terms = self.c.get((i, j), {})
        out = [ZERO] * self.dim
        for k, v in terms.items():
            out[k] = sign * v
        return tuple(out)

    def bracket(self, x: Vec, y: Vec) -> Vec:
        if len(x) != self.dim or len(y) != self.dim:
            raise PreconditionError("vector length does not match algebra dimension")
        out = [ZERO] * self.dim
        for (i, j), terms in self.c.items():
            coef = x[i] * y[j] - x[j] * y[i]
            if coef:
                for k, v in terms.items():
                    out[k] += coef * v
        return tuple(out)

    def ad(self, x: Vec) -> Mat:
        """Matrix of ad(x): column j holds the coordinates of [x, X_j]."""
        cols = [self.bracket(x, linalg.unit(self.dim, j)) for j in range(self.dim)]
        return linalg.transpose(linalg.mat(cols))

    def basis_vector(self, i: int) -> Vec:
        return linalg.unit(self.dim, i)

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise AlgebraError(f"unknown basis label {label!r}") from None

    def nilpotency_class(self) -> int:
        return len(ascending_central_series(self)) - 1

    def is_abelian(self) -> bool:
        return not self.c

    # -- validation ---------------------------------------------------------

    def _check_jacobi(self):
        n = self.dim
        for i in range(n):
            xi = linalg.unit(n, i)
            for j in range(i + 1, n):
                xj = linalg.unit(n, j)
                for k in range(j + 1, n):
                    xk = linalg.unit(n, k)
                    res = linalg.vadd(
                        linalg.vadd(
                            self.bracket(xi, self.bracket(xj, xk)),
                            self.bracket(xj, self.bracket(xk, xi)),
                        ),
                        self.bracket(xk, self.bracket(xi, xj)),
                    )
                    if not linalg.is_zero_vec(res):
                        raise AlgebraError(
                            f"Jacobi identity fails on basis triple ({i},{j},{k})"
                        )

    def _check_nilpotent(self):
        self._series = _central_series(self)
        if linalg.rank(self._series[-1].generators) != self.dim:
            raise AlgebraError("ascending central series does not reach the algebra")

    # -- serialization ------------------------------------------------------

    @classmethod
    def from_dict(cls, data: dict) -> "NilpotentLieAlgebra":
        try:
            dim = data["dim"]
            labels = data["basis"]
            brackets = data.get("brackets", [])
        except (KeyError, TypeError) as exc:
            raise AlgebraError(f"malformed algebra file: {exc}") from None
        index = {lab: i for i, lab in enumerate(labels)}
        c: dict = {}
        for entry in brackets:
            i = index.get(entry["i"])
            j = index.get(entry["j"])
            if i is None or j is None:
                raise AlgebraError(f"bracket references unknown label in {entry}")
            if i == j:
                raise AlgebraError(f"bracket [{entry['i']},{entry['i']}] is zero by antisymmetry")
            sign = ONE
            if i > j:
                i, j, sign = j, i, -ONE
            terms = c.setdefault((i, j), {})
            for lab, coeff in entry["terms"]:
                k = index.get(lab)
                if k is None:
                    raise AlgebraError(f"bracket term references unknown label {lab!r}")
                terms[k] = terms.get(k, ZERO) + sign * linalg.parse_rational(coeff)
        return cls(dim, labels, c)

    @classmethod
    def from_file(cls, path) -> "NilpotentLieAlgebra":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))

    def describe(self) -> dict:
        brackets = []
        for (i, j), terms in sorted(self.c.items()):
            brackets.append(
                {
                    "i": self.labels[i],
                    "j": self.labels[j],
                    "terms": [[self.labels[k], linalg.format_rational(v)] for k, v in sorted(terms.items())],
                }
            )
        return {"dim": self.dim, "basis": list(self.labels), "brackets": brackets}


@dataclass(frozen=True)
class Subalgebra:
    """A subspace of g given by a canonical (rref) generator matrix."""

    algebra: NilpotentLieAlgebra
    generators: Mat
    is_ideal: bool = False

    @property
    def dim(self) -> int:
        return len(self.generators)

    def contains(self, x: Vec) -> bool:
        return linalg.in_span(self.generators, x)

    def __eq__(self, other):
        return (
            isinstance(other, Subalgebra)
            and self.algebra is other.algebra
            and self.generators == other.generators
        )

    def __hash__(self):
        return hash(self.generators)


def span(alg: NilpotentLieAlgebra, vectors: Sequence[Vec], *, check: bool = True) -> Subalgebra:
    """Subalgebra spanned by `vectors`; verifies bracket closure unless check=False."""
    basis = linalg.row_space(vectors)
    sub = Subalgebra(alg, basis, is_ideal=False)
    if check and not _closed_under_bracket(alg, basis):
        raise PreconditionError("span is not closed under the bracket")
    return Subalgebra(alg, basis, is_ideal=_is_ideal(alg, basis))


def _closed_under_bracket(alg: NilpotentLieAlgebra, basis: Mat) -> bool:
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if not linalg.in_span(basis, alg.bracket(basis[a], basis[b])):
                return False
    return True


def _is_ideal(alg: NilpotentLieAlgebra, basis: Mat) -> bool:
    for i in range(alg.dim):
        xi = alg.basis_vector(i)
        for row in basis:
            if not linalg.in_span(basis, alg.bracket(xi, row)):
                return False
    return True


def _central_series(alg: NilpotentLieAlgebra) -> list[Subalgebra]:
    n = alg.dim
    members = [Subalgebra(alg, (), is_ideal=True)]
    prev: Mat = ()
    for _ in range(n):
        # g_j = {x : [x, X_i] in g_{j-1} for all i}: kernel of x -> ([x, X_i] mod prev)
        proj = _quotient_projection(prev, n)
        rows: list[Vec] = []
        for i in range(n):
            adi = alg.ad(alg.basis_vector(i))  # column j = [X_i, X_j]
            # condition on x: proj([x, X_i]) = 0; [x, X_i] = -ad(X_i) x
            reduced = linalg.mat_mul(proj, adi)
            rows.extend(reduced)
        kernel = linalg.nullspace(rows) if rows else linalg.identity(n)
        basis = linalg.row_space(kernel)
        if len(basis) == len(prev):
            break
        members.append(Subalgebra(alg, basis, is_ideal=True))
        prev = basis
        if len(basis) == n:
            break
    return members


def _quotient_projection(sub_basis: Mat, n: int) -> Mat:
    """Matrix whose kernel is exactly the span of sub_basis (rows annihilate it)."""
    if not sub_basis:
        return linalg.identity(n)
    return linalg.mat(linalg.nullspace(sub_basis))  # rows: functionals vanishing on sub


def ascending_central_series(alg: NilpotentLieAlgebra) -> list[Subalgebra]:
    """0 = g_0 < g_1 < ... < g_k = g, each member an ideal, computed exactly."""
    if alg._series is None:
        alg._series = _central_series(alg)
    return list(alg._series)


def center(alg: NilpotentLieAlgebra) -> Subalgebra:
    return ascending_central_series(alg)[1] if alg.dim else Subalgebra(alg, ())


def centralizer(alg: NilpotentLieAlgebra, h: Subalgebra) -> Subalgebra:
    """z_g(h) = {x : [x, y] = 0 for all y in h}."""
    rows: list[Vec] = []
    for y in h.generators:
        ady = alg.ad(y)  # [y, X_j] columns; [x, y] = -ad(y) x
        rows.extend(ady)
    kernel = linalg.nullspace(rows) if rows else linalg.identity(alg.dim)
    basis = linalg.row_space(kernel)
    return Subalgebra(alg, basis, is_ideal=_is_ideal(alg, basis))


def normalizer(alg: NilpotentLieAlgebra, h: Subalgebra) -> Subalgebra:
    """n_g(h) = {x : [x, h] <= h}."""
    proj = _quotient_projection(h.generators, alg.dim)
    rows: list[Vec] = []
    for y in h.generators:
        ady = alg.ad(y)
        rows.extend(linalg.mat_mul(proj, ady))
    kernel = linalg.nullspace(rows) if rows else linalg.identity(alg.dim)
    basis = linalg.row_space(kernel)
    return Subalgebra(alg, basis, is_ideal=_is_ideal(alg, basis))


@dataclass(frozen=True)
class MalcevBasis:
    """Ordered basis whose prefixes are subalgebras (weak) or ideals (strong)."""

    algebra: NilpotentLieAlgebra
    vectors: tuple[Vec, ...]
    kind: str  # "weak" | "strong"
    checkpoint_indices: tuple[int, ...] = field(default_factory=tuple)

    def prefix(self, j: int) -> Subalgebra:
        basis = linalg.row_space(self.vectors[:j])
        return Subalgebra(self.algebra, basis, is_ideal=_is_ideal(self.algebra, basis))


def malcev_basis_through(
    alg: NilpotentLieAlgebra,
    chain: Sequence[Subalgebra],
    strong: bool = False,
) -> MalcevBasis:
    """Weak (resp. strong) Malcev basis threading the given ascending chain.

    Extension always picks the candidate with the lowest pivot index among the
    admissible directions, so the output is deterministic.
    """
    members = [m for m in chain if m.dim > 0]
    for prev, nxt in zip(members, members[1:]):
        for row in prev.generators:
            if not nxt.contains(row):
                raise PreconditionError("chain is not ascending")
    if strong:
        for m in members:
            if not m.is_ideal:
                raise PreconditionError("strong Malcev basis requested through a non-ideal")
    targets = list(members)
    if not targets or targets[-1].dim < alg.dim:
        targets.append(Subalgebra(alg, linalg.identity(alg.dim), is_ideal=True))

    vectors: list[Vec] = []
    checkpoints: list[int] = []
    current: Mat = ()
    for target in targets:
        while len(vectors) < target.dim:
            candidates = _extension_directions(alg, current, target, strong)
            new = None
            for cand in candidates:
                if not linalg.in_span(current, cand):
                    new = cand
                    break
            if new is None:
                raise AlgebraError("Malcev extension step found no admissible direction")
            vectors.append(new)
            current = linalg.row_space(vectors)
        checkpoints.append(len(vectors))
    # checkpoints correspond to the supplied chain members only
    checkpoints = checkpoints[: len(members)]
    return MalcevBasis(alg, tuple(vectors), "strong" if strong else "weak", tuple(checkpoints))


def _extension_directions(alg, current: Mat, target: Subalgebra, strong: bool) -> Mat:
    """Admissible next vectors: inside target, extending current to a subalgebra/ideal."""
    h = Subalgebra(alg, current)
    if strong:
        # x with [g, x] <= current keeps every prefix an ideal
        proj = _quotient_projection(current, alg.dim)
        rows: list[Vec] = []
        for i in range(alg.dim):
            adi = alg.ad(alg.basis_vector(i))
            rows.extend(linalg.mat_mul(proj, adi))
        good = linalg.nullspace(rows) if rows else linalg.identity(alg.dim)
    else:
        good = normalizer(alg, h).generators
    # intersect with target: solve for combinations lying in both spans
    inter = _intersection(good, target.generators)
    return linalg.row_space(inter)


def _intersection(a: Mat, b: Mat) -> Mat:
    if not a or not b:
        return ()
    # x = u.a = v.b  <=>  (u, v) in kernel of [a^T | -b^T]
    at = linalg.transpose(a)
    bt = linalg.transpose(b)
    rows = tuple(ra + tuple(-x for x in rb) for ra, rb in zip(at, bt))
    sols = linalg.nullspace(rows)
    out = []
    for s in sols:
        u = s[: len(a)]
        x = linalg.zeros(len(a[0]))
        for coef, row in zip(u, a):
            x = linalg.vadd(x, linalg.vscale(coef, row))
        if not linalg.is_zero_vec(x):
            out.append(x)
    return linalg.row_space(out)


@dataclass(frozen=True)
class ReducingQuadruple:
    """(Z, Y, X, g0) with [X, Y] = Z, g0 = z_g(Y), g = g0 + QX, Z spanning the center."""

    Z: Vec
    Y: Vec
    X: Vec
    g0: Subalgebra


def kirillov_quadruple(alg: NilpotentLieAlgebra) -> ReducingQuadruple:
    """Reducing quadruple for a noncommutative algebra with 1-dimensional center.

    Y is taken in g_2 minus g_1; X is a complement direction rescaled so that
    [X, Y] equals the stored central generator exactly.
    """
    if alg.is_abelian():
        raise PreconditionError("abelian algebra has no reducing quadruple")
    series = ascending_central_series(alg)
    z = series[1]
    if z.dim != 1:
        raise PreconditionError(f"center must be 1-dimensional, got {z.dim}")
    zvec = z.generators[0]
    g2 = series[2]
    yvec = None
    for row in g2.generators:
        if not z.contains(row):
            yvec = row
            break
    if yvec is None:
        raise AlgebraError("g_2 does not exceed the center in a nonabelian algebra")
    g0 = centralizer(alg, span(alg, (yvec,), check=False))
    if g0.dim != alg.dim - 1:
        raise AlgebraError("centralizer of Y is not of codimension 1")
    xvec = None
    for i in range(alg.dim):
        cand = alg.basis_vector(i)
        if not g0.contains(cand):
            xvec = cand
            break
    if xvec is None:
        raise AlgebraError("no complement direction for z_g(Y)")
    # rescale X so that [X, Y] is exactly the stored central generator
    bxy = alg.bracket(xvec, yvec)
    coeff = linalg.solve(linalg.transpose((zvec,)), bxy)
    if coeff is None or coeff[0] == 0:
        raise AlgebraError("[X, Y] does not span the center")
    xvec = linalg.vscale(ONE / coeff[0], xvec)
    return ReducingQuadruple(zvec, yvec, xvec, g0)
