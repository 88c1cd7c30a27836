"""Universal enveloping algebra in PBW normal form.

The PBW order is the stored basis order (center first), so each rewrite
X_j X_i -> X_i X_j + [X_j, X_i] for j > i strictly decreases either the word
length or the inversion count, which guarantees termination.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import permutations

from . import linalg
from .algebra import NilpotentLieAlgebra, PreconditionError
from .linalg import Vec, ZERO, ONE
from .orbits import random_orbit_point
from .polynomials import DualPolynomial

Exponents = tuple[int, ...]


class EnvelopingElement:
    """Element of U(g) as a map from PBW exponent vectors to coefficients."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: NilpotentLieAlgebra, terms=None):
        self.algebra = algebra
        self.terms: dict[Exponents, Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    self.terms[tuple(e)] = c

    @classmethod
    def one(cls, algebra: NilpotentLieAlgebra) -> "EnvelopingElement":
        return cls(algebra, {(0,) * algebra.dim: ONE})

    @classmethod
    def generator(cls, algebra: NilpotentLieAlgebra, i: int) -> "EnvelopingElement":
        e = [0] * algebra.dim
        e[i] = 1
        return cls(algebra, {tuple(e): ONE})

    @classmethod
    def from_vector(cls, algebra: NilpotentLieAlgebra, x: Vec) -> "EnvelopingElement":
        out = cls(algebra)
        for i, coeff in enumerate(x):
            if coeff:
                e = [0] * algebra.dim
                e[i] = 1
                out = out + cls(algebra, {tuple(e): coeff})
        return out

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return EnvelopingElement(self.algebra, out)

    def __sub__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) - c
        return EnvelopingElement(self.algebra, out)

    def scale(self, c) -> "EnvelopingElement":
        c = Fraction(c)
        return EnvelopingElement(self.algebra, {e: c * v for e, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, EnvelopingElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"EnvelopingElement({self.terms!r})"


def _word_of(e: Exponents) -> tuple[int, ...]:
    out = []
    for i, k in enumerate(e):
        out.extend([i] * k)
    return tuple(out)


def normal_order(alg: NilpotentLieAlgebra, word: tuple[int, ...],
                 strategy: str = "first") -> EnvelopingElement:
    """Rewrite a generator word into PBW normal form.

    strategy picks which adjacent descent is rewritten next ("first" or
    "last"); all strategies reach the same normal form (confluence is part of
    the test suite).
    """
    todo: list[tuple[Fraction, tuple[int, ...]]] = [(ONE, tuple(word))]
    acc: dict[Exponents, Fraction] = {}
    while todo:
        coeff, w = todo.pop()
        pos = None
        rng_iter = range(len(w) - 1) if strategy == "first" else range(len(w) - 2, -1, -1)
        for t in rng_iter:
            if w[t] > w[t + 1]:
                pos = t
                break
        if pos is None:
            e = [0] * alg.dim
            for letter in w:
                e[letter] += 1
            e = tuple(e)
            acc[e] = acc.get(e, ZERO) + coeff
            continue
        a, b = w[pos], w[pos + 1]
        swapped = w[:pos] + (b, a) + w[pos + 2:]
        todo.append((coeff, swapped))
        for k, v in enumerate(alg.basis_bracket(a, b)):
            if v:
                todo.append((coeff * v, w[:pos] + (k,) + w[pos + 2:]))
    return EnvelopingElement(alg, acc)


def pbw_multiply(a: EnvelopingElement, b: EnvelopingElement,
                 strategy: str = "first") -> EnvelopingElement:
    if a.algebra is not b.algebra:
        raise PreconditionError("factors live in different algebras")
    alg = a.algebra
    out = EnvelopingElement(alg)
    for ea, ca in a.terms.items():
        wa = _word_of(ea)
        for eb, cb in b.terms.items():
            out = out + normal_order(alg, wa + _word_of(eb), strategy).scale(ca * cb)
    return out


def symmetrize(alg: NilpotentLieAlgebra, p: DualPolynomial) -> EnvelopingElement:
    """PBW image of the symmetrization map S(g) -> U(g), monomial by monomial:
    Y_1 ... Y_r maps to (1/r!) sum over all orderings."""
    if p.nvars != alg.dim:
        raise PreconditionError("polynomial has wrong number of variables")
    out = EnvelopingElement(alg)
    for e, c in p.terms.items():
        word = _word_of(e)
        r = len(word)
        if r == 0:
            out = out + EnvelopingElement(alg, {(0,) * alg.dim: c})
            continue
        seen: dict[tuple[int, ...], int] = {}
        for perm in permutations(word):
            seen[perm] = seen.get(perm, 0) + 1
        scale = c / Fraction(math.factorial(r))
        for w, mult in seen.items():
            out = out + normal_order(alg, w).scale(scale * mult)
    return out


def is_central(a: EnvelopingElement) -> bool:
    alg = a.algebra
    for i in range(alg.dim):
        gen = EnvelopingElement.generator(alg, i)
        if pbw_multiply(a, gen) != pbw_multiply(gen, a):
            return False
    return True


def adjoint_transport(alg: NilpotentLieAlgebra, log_g: Vec, a: EnvelopingElement) -> EnvelopingElement:
    """Extend Ad(exp(log_g)) multiplicatively from generators to U(g)."""
    ad = linalg.matrix_exp_nilpotent(alg.ad(log_g))
    images = [EnvelopingElement.from_vector(alg, tuple(ad[r][j] for r in range(alg.dim)))
              for j in range(alg.dim)]
    out = EnvelopingElement(alg)
    for e, c in a.terms.items():
        term = EnvelopingElement.one(alg).scale(c)
        for i, k in enumerate(e):
            for _ in range(k):
                term = pbw_multiply(term, images[i])
        out = out + term
    return out


def scalar_eigenvalue(alg: NilpotentLieAlgebra, p: DualPolynomial, ell: Vec,
                      *, seed: int = 0, samples: int = 20) -> complex:
    """Scalar by which the symmetrized operator of p acts in the representation
    attached to the orbit of ell: the value p(2*pi*i*ell).

    Orbit-constancy of p is a precondition, verified by seeded sampling; the
    per-monomial bookkeeping of (2 pi i)^deg is exact up to the final float.
    """
    rng = random.Random(seed)
    base = p.evaluate(ell)
    for _ in range(samples):
        if p.evaluate(random_orbit_point(alg, ell, rng)) != base:
            raise PreconditionError("polynomial is not constant on the orbit of ell")
    by_degree: dict[int, Fraction] = {}
    for e, c in p.terms.items():
        v = c
        for xi, ei in zip(ell, e):
            for _ in range(ei):
                v *= xi
        d = sum(e)
        by_degree[d] = by_degree.get(d, ZERO) + v
    out = 0j
    for d, coeff in by_degree.items():
        out += complex(coeff) * (2j * math.pi) ** d
    return out
