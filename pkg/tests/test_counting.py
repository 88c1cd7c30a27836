import math
import random

import pytest

from heightlab.algebra import PreconditionError
from heightlab.counting import (
    BudgetExceeded,
    CheckpointStore,
    box_side,
    count_translated_p1,
    enumerate_points,
    enumerate_points_partitioned,
    fit_and_compare,
    heisenberg_coords,
    heisenberg_embed,
    height,
    log_spaced_bounds,
    normalize_point,
)


def test_height_p1(models):
    assert height(models["p1"], (2, 1)) == 4  # the point x = 1/2
    assert height(models["p1"], (1, 0)) == 1
    assert height(models["p1"], (1, 7)) == 49


def test_height_identity_all_models(models):
    for m in models.values():
        pt = (1,) + (0,) * m.dim
        assert height(m, pt) == 1


def test_height_blowup_formula(models):
    m = models["blowup_p2"]
    rng = random.Random(40)
    for _ in range(200):
        pt = (rng.randint(1, 30), rng.randint(-30, 30), rng.randint(-30, 30))
        g = math.gcd(math.gcd(pt[0], pt[1]), pt[2])
        pt = tuple(v // g for v in pt)
        big = max(abs(v) for v in pt)
        m2 = max(abs(pt[0]), abs(pt[1]))
        expected = big**3 * m2 // (math.gcd(pt[0], pt[1]) * big)
        assert height(m, pt) == expected


def test_height_p3_ignores_group_structure(models):
    # the Heisenberg model shares the plain projective evaluator
    m = models["p3"]
    assert height(m, (1, 2, 3, 4)) == 4**4
    assert height(m, (3, 1, 1, 2)) == 81


def test_height_rejections(models):
    with pytest.raises(PreconditionError):
        height(models["p1"], (0, 1))
    with pytest.raises(PreconditionError):
        height(models["p1"], (2, 4))
    with pytest.raises(PreconditionError):
        height(models["p1"], (-1, 2))


def test_normalize_point():
    assert normalize_point((-2, 4)) == (1, -2)
    assert normalize_point((6, -4, 2)) == (3, -2, 1)
    with pytest.raises(PreconditionError):
        normalize_point((0, 1))


def test_enumeration_examples(models):
    p1 = models["p1"]
    assert enumerate_points(p1, 4) == 7
    assert enumerate_points(p1, 1) == 3
    for m in models.values():
        assert enumerate_points(m, 0) == 0


def test_enumeration_matches_filtered_bruteforce(models):
    # oversized box + per-point exact height filter
    for name, bound in (("p1", 300), ("p2", 250), ("p3", 50), ("blowup_p2", 150)):
        m = models[name]
        t = box_side(m, bound) + 3
        total = 0
        ranges = [range(1, t + 1)] + [range(-t, t + 1)] * m.dim

        def rec(prefix, k):
            nonlocal total
            if k == m.dim + 1:
                g = 0
                for v in prefix:
                    g = math.gcd(g, v)
                if g == 1 and height(m, prefix) <= bound:
                    total += 1
                return
            for v in ranges[k]:
                rec(prefix + (v,), k + 1)

        rec((), 0)
        assert enumerate_points(m, bound) == total, name


def test_backends_agree(models):
    for name, bound in (("p1", 500), ("p2", 300), ("p3", 60), ("blowup_p2", 200)):
        m = models[name]
        assert enumerate_points(m, bound, backend="numba") == enumerate_points(m, bound, backend="numpy")


def test_monotone(models):
    m = models["blowup_p2"]
    counts = [enumerate_points(m, b) for b in (10, 100, 1000, 10000)]
    assert counts == sorted(counts)


def test_budget_guard(models):
    with pytest.raises(BudgetExceeded):
        enumerate_points(models["p1"], 10**8, budget=1000)


def test_partitioned_and_checkpoint(models, tmp_path):
    m = models["p2"]
    direct = enumerate_points(m, 10**5)
    store = CheckpointStore(tmp_path / "cp.json")
    assert enumerate_points_partitioned(m, 10**5, partitions=5, checkpoint=store) == direct
    # resumption reads every partition from the store
    again = CheckpointStore(tmp_path / "cp.json")
    assert len(again.entries) == 5
    assert enumerate_points_partitioned(m, 10**5, partitions=5, checkpoint=again) == direct


def test_fit_synthetic_two_coefficients():
    samples = [(b, 2 * b * math.log(b) + 5 * b) for b in
               (10**3, 3 * 10**3, 10**4, 3 * 10**4, 10**5, 3 * 10**5, 10**6)]
    rep = fit_and_compare(samples, 2, 2.0)
    assert abs(rep.fitted_coefficient - 2.0) < 1e-6
    assert rep.deviation < 1e-6


def test_fit_degenerate_single_log_power():
    samples = [(10**4, 3 * 10**4), (10**5, 3 * 10**5), (10**6, 3 * 10**6)]
    rep = fit_and_compare(samples, 1, 3.0)
    assert rep.fitted_coefficient == pytest.approx(3.0)
    assert rep.deviation < 1e-12


def test_fit_preconditions():
    with pytest.raises(PreconditionError):
        fit_and_compare([(10, 1), (100, 2)], 1, 1.0)
    with pytest.raises(PreconditionError):
        fit_and_compare([(10, 1), (20, 2), (30, 3)], 1, 1.0)  # narrow span


def test_report_rows():
    samples = [(10**3, 2000), (10**4, 20000), (10**5, 200000), (10**6, 2000000)]
    rep = fit_and_compare(samples, 1, 2.0)
    rows = rep.rows()
    assert [r[0] for r in rows] == [s[0] for s in samples]
    for _, _, ratio in rows:
        assert ratio == pytest.approx(1.0)


def test_log_spaced_bounds():
    bs = log_spaced_bounds(10**6, 10)
    assert bs[0] == 10**3 and bs[-1] == 10**6 and len(bs) == 10
    assert bs == sorted(bs)


def test_translation_counts(models):
    m = models["p1"]
    bound = 10**4
    n = enumerate_points(m, bound)
    for c in (-3, 1, 5):
        assert count_translated_p1(bound, c) == n  # translation is a bijection of G(Q)


def test_heisenberg_embedding_roundtrip():
    rng = random.Random(41)
    for _ in range(100):
        pt = (rng.randint(1, 9), rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(-9, 9))
        g = 0
        for v in pt:
            g = math.gcd(g, v)
        pt = tuple(v // g for v in pt)
        assert heisenberg_embed(*heisenberg_coords(pt)) == pt


def test_heisenberg_point_set_identical(models):
    # N(B) through additive and through Heisenberg coordinates: same point set
    m = models["p3"]
    bound = 81
    t = box_side(m, bound)
    additive = set()
    for w in range(1, t + 1):
        for a in range(-t, t + 1):
            for b in range(-t, t + 1):
                for c in range(-t, t + 1):
                    g = math.gcd(math.gcd(w, a), math.gcd(b, c))
                    if g == 1 and height(m, (w, a, b, c)) <= bound:
                        additive.add((w, a, b, c))
    via_group = {heisenberg_embed(*heisenberg_coords(pt)) for pt in additive}
    assert via_group == additive
    assert len(additive) == enumerate_points(m, bound)
