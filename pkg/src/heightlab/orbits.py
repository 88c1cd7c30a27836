"""Coadjoint action and orbit analysis.

Strata are handled per point: the d-vector, its I/J index split and the
relative Pfaffian are computed exactly at any given functional, and distinct
strata are discovered by seeded Monte-Carlo sampling rather than by a general
semialgebraic decomposition.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .algebra import NilpotentLieAlgebra, PreconditionError, Subalgebra, MalcevBasis, ascending_central_series, malcev_basis_through, span, _is_ideal
from .linalg import Mat, Vec, ZERO, ONE
from .polynomials import DualPolynomial


def standard_strong_basis(alg: NilpotentLieAlgebra) -> MalcevBasis:
    """Strong Malcev basis through the ascending central series.

    If the stored basis order already works (true for every shipped algebra),
    it is kept; otherwise one is constructed.
    """
    series = ascending_central_series(alg)
    vectors = tuple(alg.basis_vector(i) for i in range(alg.dim))
    checkpoints = []
    ok = True
    for member in series[1:]:
        pref = linalg.row_space(vectors[: member.dim])
        if pref == member.generators:
            checkpoints.append(member.dim)
        else:
            ok = False
            break
    if ok:
        for j in range(1, alg.dim + 1):
            if not _is_ideal(alg, linalg.row_space(vectors[:j])):
                ok = False
                break
    if ok:
        return MalcevBasis(alg, vectors, "strong", tuple(checkpoints))
    return malcev_basis_through(alg, series[1:], strong=True)


def coadjoint_act(alg: NilpotentLieAlgebra, log_g: Vec, ell: Vec) -> Vec:
    """Ad*(exp(log_g)) ell = ell o Ad(exp(-log_g)), via exact exp of -ad."""
    e = linalg.matrix_exp_nilpotent(linalg.mat([[-x for x in row] for row in alg.ad(log_g)]))
    return linalg.mat_vec(linalg.transpose(e), ell)


def random_orbit_point(alg: NilpotentLieAlgebra, ell: Vec, rng: random.Random) -> Vec:
    g = tuple(Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for _ in range(alg.dim))
    return coadjoint_act(alg, g, ell)


def b_form(alg: NilpotentLieAlgebra, ell: Vec) -> Mat:
    """Skew matrix M[i][j] = ell([X_i, X_j])."""
    n = alg.dim
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append(linalg.dot(ell, alg.basis_bracket(i, j)))
        rows.append(tuple(row))
    return tuple(rows)


def radical(alg: NilpotentLieAlgebra, ell: Vec) -> Subalgebra:
    kernel = linalg.nullspace(b_form(alg, ell))
    basis = linalg.row_space(kernel)
    return Subalgebra(alg, basis, is_ideal=_is_ideal(alg, basis))


def orbit_dim(alg: NilpotentLieAlgebra, ell: Vec) -> int:
    return linalg.rank(b_form(alg, ell))


def vergne_polarization(alg: NilpotentLieAlgebra, ell: Vec, basis: MalcevBasis) -> Subalgebra:
    """Vergne's polarization: the sum of radicals of B_ell restricted to the
    prefix ideals of a strong Malcev basis.  Output is verified to be an
    isotropic subalgebra of dimension dim r_ell + (n - dim r_ell)/2.
    """
    if basis.kind != "strong":
        raise PreconditionError("Vergne's construction needs a strong Malcev basis")
    n = alg.dim
    pieces: list[Vec] = []
    for j in range(1, n + 1):
        pref = basis.vectors[:j]
        m = tuple(
            tuple(linalg.dot(ell, alg.bracket(pref[a], pref[b])) for b in range(j))
            for a in range(j)
        )
        for coeffs in linalg.nullspace(m):
            v = linalg.zeros(n)
            for c, w in zip(coeffs, pref):
                v = linalg.vadd(v, linalg.vscale(c, w))
            pieces.append(v)
    gen = linalg.row_space(pieces)
    sub = span(alg, gen)  # raises if not bracket-closed
    r = radical(alg, ell).dim
    want = r + (n - r) // 2
    for a in range(len(gen)):
        for b in range(a + 1, len(gen)):
            if linalg.dot(ell, alg.bracket(gen[a], gen[b])) != 0:
                raise PreconditionError("polarization candidate is not isotropic")
    if sub.dim != want:
        raise PreconditionError(
            f"polarization has dimension {sub.dim}, expected {want}"
        )
    return sub


@dataclass(frozen=True)
class StratumData:
    """d-vector with its jump set I, complement J and half-rank k."""

    d: tuple[int, ...]
    I: tuple[int, ...]  # 1-based indices with d_i = d_{i-1} + 1
    J: tuple[int, ...]  # 1-based indices with d_j = d_{j-1}
    k: int

    def __post_init__(self):
        if len(self.I) % 2 != 0:
            raise PreconditionError("jump set I must have even size")


def d_vector(alg: NilpotentLieAlgebra, ell: Vec, basis: MalcevBasis) -> StratumData:
    """d_j = rank of the n x j matrix (ell([v_a, v_b]))_{a<=n, b<=j}."""
    if basis.kind != "strong":
        raise PreconditionError("d-vector stratification needs a strong Malcev basis")
    n = alg.dim
    full = tuple(
        tuple(linalg.dot(ell, alg.bracket(basis.vectors[a], basis.vectors[b])) for b in range(n))
        for a in range(n)
    )
    d = []
    for j in range(1, n + 1):
        sub = tuple(row[:j] for row in full)
        d.append(linalg.rank(sub))
    I, J = [], []
    prev = 0
    for j, dj in enumerate(d, start=1):
        if dj == prev + 1:
            I.append(j)
        elif dj == prev:
            J.append(j)
        else:
            raise PreconditionError("d-vector must increase by steps of 0 or 1")
        prev = dj
    return StratumData(tuple(d), tuple(I), tuple(J), len(I) // 2)


def orbit_representative(alg: NilpotentLieAlgebra, ell: Vec, basis: MalcevBasis | None = None) -> Vec:
    """The unique point of the orbit through ell whose I-coordinates vanish.

    Jump coordinates are cleared in increasing order.  At step i the moving
    direction x is chosen in the left kernel of the first i-1 bracket columns,
    which freezes all earlier coordinates and leaves coordinate i exactly
    linear in the flow parameter.  Exact linearity needs the basis to thread
    the ascending central series (so [g, v_b] lands below position b), which
    standard_strong_basis guarantees; a failed clearing step is reported as a
    d-vector/basis inconsistency.
    """
    if basis is None:
        basis = standard_strong_basis(alg)
    stratum = d_vector(alg, ell, basis)
    n = alg.dim
    cur = ell
    for i in stratum.I:
        cols = tuple(
            tuple(linalg.dot(cur, alg.bracket(basis.vectors[a], basis.vectors[b])) for b in range(i - 1))
            for a in range(n)
        )
        kern = linalg.left_nullspace(cols) if i > 1 else linalg.identity(n)
        target_col = tuple(
            linalg.dot(cur, alg.bracket(basis.vectors[a], basis.vectors[i - 1])) for a in range(n)
        )
        x = None
        pairing = ZERO
        for cand in kern:
            pairing = linalg.dot(cand, target_col)
            if pairing != 0:
                x = cand
                break
        if x is None:
            raise PreconditionError("triangular solve failed: d-vector/basis inconsistency")
        move = linalg.zeros(n)
        for c, w in zip(x, basis.vectors):
            move = linalg.vadd(move, linalg.vscale(c, w))
        coord = linalg.dot(cur, basis.vectors[i - 1])
        t = coord / pairing
        cur = coadjoint_act(alg, linalg.vscale(t, move), cur)
        if linalg.dot(cur, basis.vectors[i - 1]) != 0:
            raise PreconditionError("triangular solve failed to clear a jump coordinate")
    final = d_vector(alg, cur, basis)
    if final.d != stratum.d:
        raise PreconditionError("representative left its stratum")
    return cur


def pfaffian(alg: NilpotentLieAlgebra, ell: Vec, stratum: StratumData | None = None,
             basis: MalcevBasis | None = None) -> Fraction:
    """Relative Pfaffian: Pf of the skew block on the jump indices.

    Empty jump set (point orbits) gives 1 by the empty-product convention;
    Pf(ell)^2 equals the determinant of that block.
    """
    if basis is None:
        basis = standard_strong_basis(alg)
    if stratum is None:
        stratum = d_vector(alg, ell, basis)
    idx = stratum.I
    if len(idx) % 2 != 0:
        raise PreconditionError("jump set has odd size")
    block = tuple(
        tuple(linalg.dot(ell, alg.bracket(basis.vectors[a - 1], basis.vectors[b - 1])) for b in idx)
        for a in idx
    )
    return _pf(block)


def _pf(m: Mat) -> Fraction:
    n = len(m)
    if n == 0:
        return ONE
    total = ZERO
    rest = list(range(1, n))
    for pos, j in enumerate(rest):
        if m[0][j] == 0:
            continue
        sign = ONE if pos % 2 == 0 else -ONE
        keep = [k for k in rest if k != j]
        sub = tuple(tuple(m[a][b] for b in keep) for a in keep)
        total += sign * m[0][j] * _pf(sub)
    return total


@dataclass(frozen=True)
class OrbitNorm:
    value: Fraction
    invariant_set: str = ""

    @property
    def as_float(self) -> float:
        return float(self.value)


def orbit_norm(alg: NilpotentLieAlgebra, ell: Vec, invariants: list[DualPolynomial],
               *, seed: int = 0, samples: int = 20, invariant_set: str = "") -> OrbitNorm:
    """Archimedean orbit norm: max_j |P_j(ell)| over the single real place.

    The supplied polynomials are sampled along the orbit first; any detected
    non-invariance is an error.
    """
    rng = random.Random(seed)
    for p in invariants:
        base = p.evaluate(ell)
        for _ in range(samples):
            other = random_orbit_point(alg, ell, rng)
            if p.evaluate(other) != base:
                raise PreconditionError("polynomial is not constant on the orbit")
    value = max((abs(p.evaluate(ell)) for p in invariants), default=ZERO)
    return OrbitNorm(value, invariant_set)


def multiplicity_bound(alg: NilpotentLieAlgebra, ell: Vec, p: int,
                       basis: MalcevBasis | None = None,
                       stratum: StratumData | None = None) -> Fraction:
    """|Pf(ell)|_p^{-1} = p^{v_p(Pf)}; equals 1 at good primes, c_v = 1.

    On its own stratum the relative Pfaffian never vanishes; a zero value
    (possible only when a foreign stratum is supplied) is an error.
    """
    pf = pfaffian(alg, ell, stratum=stratum, basis=basis)
    if pf == 0:
        raise PreconditionError("multiplicity bound needs a nonzero Pfaffian")
    return Fraction(p) ** _val(pf, p)


def _val(x: Fraction, p: int) -> int:
    num, den = x.numerator, x.denominator
    v = 0
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def discover_strata(alg: NilpotentLieAlgebra, basis: MalcevBasis | None = None,
                    *, samples: int = 200, seed: int = 0) -> list[tuple[tuple[int, ...], Vec]]:
    """Monte-Carlo stratum discovery: sample rational points of g* and collect
    the distinct d-vectors, ordered lexicographically.  Includes 0 and the
    standard dual basis points so degenerate strata are never missed.
    """
    if basis is None:
        basis = standard_strong_basis(alg)
    rng = random.Random(seed)
    seen: dict[tuple[int, ...], Vec] = {}
    pts = [linalg.zeros(alg.dim)] + [linalg.unit(alg.dim, i) for i in range(alg.dim)]
    for _ in range(samples):
        pts.append(tuple(Fraction(rng.randint(-9, 9), rng.choice((1, 2, 3))) for _ in range(alg.dim)))
    for ell in pts:
        s = d_vector(alg, ell, basis)
        seen.setdefault(s.d, ell)
    return sorted(seen.items())
