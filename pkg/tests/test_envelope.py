import math
import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from heightlab import data, linalg
from heightlab.algebra import PreconditionError
from heightlab.envelope import (
    EnvelopingElement,
    adjoint_transport,
    is_central,
    normal_order,
    pbw_multiply,
    scalar_eigenvalue,
    symmetrize,
)
from heightlab.polynomials import DualPolynomial
from conftest import rand_vec


def test_pbw_rewrite_example(h3):
    X = EnvelopingElement.generator(h3, 2)
    Y = EnvelopingElement.generator(h3, 1)
    prod = pbw_multiply(X, Y)
    assert prod.terms == {(0, 1, 1): Fraction(1), (1, 0, 0): Fraction(1)}


def test_unit(h3):
    one = EnvelopingElement.one(h3)
    rng = random.Random(30)
    for _ in range(20):
        a = _rand_elem(h3, rng)
        assert pbw_multiply(one, a) == a == pbw_multiply(a, one)


def _rand_elem(alg, rng, nterms=3):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, 2) for _ in range(alg.dim))
        terms[e] = Fraction(rng.randint(-4, 4))
    return EnvelopingElement(alg, terms)


def test_associativity(h3, k4):
    rng = random.Random(31)
    for alg in (h3, k4):
        for _ in range(100):
            a, b, c = (_rand_elem(alg, rng, 2) for _ in range(3))
            assert pbw_multiply(pbw_multiply(a, b), c) == pbw_multiply(a, pbw_multiply(b, c))


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), max_size=6))
def test_pbw_confluence(word):
    alg = data.load_algebra("k4")
    w = tuple(word)
    assert normal_order(alg, w, "first") == normal_order(alg, w, "last")


def test_symmetrize_degree_one(h3):
    p = DualPolynomial.coordinate(3, 0)  # the Z coordinate
    assert symmetrize(h3, p) == EnvelopingElement.generator(h3, 0)


def test_symmetrize_yx(h3):
    p = DualPolynomial(3, {(0, 1, 1): Fraction(1)})
    s = symmetrize(h3, p)
    assert s.terms == {(0, 1, 1): Fraction(1), (1, 0, 0): Fraction(1, 2)}


def test_symmetrize_bijective_on_low_degrees(h3):
    monos = [e for e in product(range(4), repeat=3) if sum(e) <= 3]
    cols = []
    for e in monos:
        img = symmetrize(h3, DualPolynomial(3, {e: Fraction(1)}))
        cols.append([img.terms.get(mm, Fraction(0)) for mm in monos])
    assert linalg.rank(linalg.transpose(linalg.mat(cols))) == len(monos)


def test_centrality(h3, k4):
    assert is_central(EnvelopingElement.generator(h3, 0))       # Z
    assert not is_central(EnvelopingElement.generator(h3, 2))   # X
    for name, inv in (("h3", "h3_invariants"), ("k4", "k4_invariants")):
        alg = data.load_algebra(name)
        for p in data.load_invariants(inv):
            assert is_central(symmetrize(alg, p))


def test_scalar_eigenvalue_linear(h3):
    ev = scalar_eigenvalue(h3, DualPolynomial.coordinate(3, 0), (Fraction(3), Fraction(1), Fraction(2)))
    assert ev == 2j * math.pi * 3


def test_scalar_eigenvalue_constant_poly(h3):
    one = DualPolynomial.constant(3, 1)
    assert scalar_eigenvalue(h3, one, (Fraction(9), Fraction(1), Fraction(4))) == 1


def test_scalar_eigenvalue_orbit_constant(k4):
    rng = random.Random(32)
    polys = data.load_invariants("k4_invariants")
    from heightlab.orbits import random_orbit_point

    for _ in range(20):
        ell = rand_vec(rng, 4)
        for p in polys:
            v = scalar_eigenvalue(k4, p, ell)
            for _ in range(5):
                assert scalar_eigenvalue(k4, p, random_orbit_point(k4, ell, rng)) == v


def test_scalar_eigenvalue_rejects_non_invariant(h3):
    with pytest.raises(PreconditionError):
        scalar_eigenvalue(h3, DualPolynomial.coordinate(3, 1), (Fraction(1), Fraction(2), Fraction(3)))


def test_symmetrization_equivariance(h3, k4):
    rng = random.Random(33)
    for alg in (h3, k4):
        n = alg.dim
        quad = DualPolynomial(n, {tuple(2 if i == n - 1 else 0 for i in range(n)): Fraction(1)})
        lin = DualPolynomial.coordinate(n, n - 1)
        for _ in range(50):
            v = tuple(Fraction(rng.randint(-3, 3)) for _ in range(n))
            coad = linalg.transpose(
                linalg.matrix_exp_nilpotent(linalg.mat([[-x for x in row] for row in alg.ad(v)]))
            )
            for p in (lin, quad):
                lhs = symmetrize(alg, p.compose_linear(coad))
                rhs = adjoint_transport(alg, tuple(-x for x in v), symmetrize(alg, p))
                assert lhs == rhs
