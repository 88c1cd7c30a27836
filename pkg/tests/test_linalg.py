import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from heightlab import linalg

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=6)


def small_matrix(rng, rows, cols):
    return linalg.mat([[Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3))) for _ in range(cols)] for _ in range(rows)])


def test_rref_idempotent():
    rng = random.Random(0)
    for _ in range(50):
        m = small_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        red, piv = linalg.rref(m)
        again, piv2 = linalg.rref(red)
        assert red == again and piv == piv2


def test_nullspace_annihilates():
    rng = random.Random(1)
    for _ in range(50):
        m = small_matrix(rng, rng.randint(1, 4), rng.randint(1, 5))
        for v in linalg.nullspace(m):
            assert linalg.is_zero_vec(linalg.mat_vec(m, v))
        assert linalg.rank(m) + len(linalg.nullspace(m)) == len(m[0])


@settings(max_examples=60, deadline=None)
@given(st.lists(st.lists(rationals, min_size=3, max_size=3), min_size=3, max_size=3),
       st.lists(rationals, min_size=3, max_size=3))
def test_solve_consistency(rows, x):
    m = linalg.mat(rows)
    b = linalg.mat_vec(m, linalg.vec(x))
    sol = linalg.solve(m, b)
    assert sol is not None
    assert linalg.mat_vec(m, sol) == b


def test_exp_log_inverse_pair():
    rng = random.Random(2)
    for _ in range(30):
        n = rng.randint(2, 4)
        a = linalg.mat([[Fraction(rng.randint(-3, 3), rng.choice((1, 2))) if j > i else Fraction(0)
                         for j in range(n)] for i in range(n)])
        m = linalg.matrix_exp_nilpotent(a)
        assert linalg.matrix_log_unipotent(m) == a


def test_log_rejects_non_unipotent():
    m = linalg.mat([[2, 0], [0, 1]])
    try:
        linalg.matrix_log_unipotent(m)
    except ValueError:
        return
    raise AssertionError("expected ValueError")


def test_in_span_membership():
    basis = linalg.row_space([linalg.vec([1, 0, 1]), linalg.vec([0, 1, 1])])
    assert linalg.in_span(basis, linalg.vec([1, 1, 2]))
    assert not linalg.in_span(basis, linalg.vec([0, 0, 1]))
