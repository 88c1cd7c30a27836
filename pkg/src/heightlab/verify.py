"""Aggregated property suites behind the `verify` CLI subcommand.

Each check is a named callable returning a detail string; a suite runs its
checks in order and stops at the first exact-arithmetic mismatch.  All
randomness flows from the single seed, so identical invocations produce
byte-identical reports.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction

from . import counting, data, envelope, groups, linalg, orbits, zeta
from .algebra import ascending_central_series, center, centralizer, kirillov_quadruple, malcev_basis_through, normalizer, span
from .geometry import DivisorClass, abc_invariants, anticanonical_class, twist_pole_set, validate_model

NONABELIAN = ("h3", "n3", "k4")
WITH_REPS = ("h3", "n3", "k4")


def _rand_vec(rng: random.Random, n: int, dens=(1, 2, 3)):
    return tuple(Fraction(rng.randint(-9, 9), rng.choice(dens)) for _ in range(n))


def _rand_int_vec(rng: random.Random, n: int, lo=-9, hi=9):
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))


class CheckFailure(AssertionError):
    pass


def _require(cond, msg):
    if not cond:
        raise CheckFailure(msg)


# -- algebra suite -----------------------------------------------------------


def check_series_are_ideals(seed):
    rng = random.Random(seed)
    for name in data.SHIPPED_ALGEBRAS:
        alg = data.load_algebra(name)
        series = ascending_central_series(alg)
        for prev, member in zip(series, series[1:]):
            for _ in range(100):
                x = _rand_vec(rng, alg.dim)
                row = member.generators[rng.randrange(member.dim)]
                _require(prev.contains(alg.bracket(x, row)),
                         f"{name}: [g, g_j] escaped g_(j-1)")
    return f"{len(data.SHIPPED_ALGEBRAS)} algebras, 100 samples per series step"


def check_strong_malcev_prefixes(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        basis = malcev_basis_through(alg, ascending_central_series(alg)[1:], strong=True)
        for j in range(1, alg.dim + 1):
            pref = basis.prefix(j)
            _require(pref.is_ideal, f"{name}: prefix {j} is not an ideal")
            for _ in range(100):
                x = _rand_vec(rng, alg.dim)
                y = pref.generators[rng.randrange(pref.dim)]
                _require(pref.contains(alg.bracket(x, y)), f"{name}: prefix {j} not an ideal on sample")
    return "strong prefixes are ideals (100 bracket samples per prefix)"


def check_kirillov_quadruples(seed):
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        if center(alg).dim != 1:
            continue
        q = kirillov_quadruple(alg)
        _require(alg.bracket(q.X, q.Y) == q.Z, f"{name}: [X, Y] != Z")
        _require(q.g0.dim == alg.dim - 1, f"{name}: z_g(Y) not of codimension 1")
        _require(centralizer(alg, span(alg, (q.Y,), check=False)) == q.g0, f"{name}: g0 != z_g(Y)")
    return "reducing quadruples certified on the 1-dimensional-center algebras"


def check_centralizer_center(seed):
    for name in data.SHIPPED_ALGEBRAS:
        alg = data.load_algebra(name)
        full = span(alg, tuple(alg.basis_vector(i) for i in range(alg.dim)), check=False)
        _require(centralizer(alg, full) == center(alg), f"{name}: centralizer(g) != center")
        _require(normalizer(alg, center(alg)).dim == alg.dim, f"{name}: normalizer of an ideal != g")
    return "centralizer(g) = center and normalizer(ideal) = g"


# -- groups suite ------------------------------------------------------------


def check_bch_associativity(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        for _ in range(200):
            x, y, z = (_rand_vec(rng, alg.dim) for _ in range(3))
            _require(groups.bch(alg, groups.bch(alg, x, y), z) == groups.bch(alg, x, groups.bch(alg, y, z)),
                     f"{name}: BCH associativity failed")
    return "200 random triples per nonabelian algebra"


def check_bch_matrix_oracle(seed):
    rng = random.Random(seed)
    for name in WITH_REPS:
        alg = data.load_algebra(name)
        rep = data.load_rep(data.MATRIX_REPS[name], alg)
        for _ in range(200):
            x, y = _rand_vec(rng, alg.dim), _rand_vec(rng, alg.dim)
            _require(groups.bch(alg, x, y) == rep.group_product(x, y),
                     f"{name}: bch != log(exp exp)")
    return "bch == log(exp . exp) on 200 pairs per represented algebra"


def check_group_inverse(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        for _ in range(100):
            x = _rand_vec(rng, alg.dim)
            _require(linalg.is_zero_vec(groups.bch(alg, x, groups.group_inverse(x))),
                     f"{name}: x * x^-1 != e")
    return "bch(x, -x) = 0 on 100 samples per algebra"


def check_universal_scalars(seed):
    rng = random.Random(seed)
    expected = {"g2": 1, "h3": 2, "n3": 2, "k4": 6}
    for name, want in expected.items():
        alg = data.load_algebra(name)
        a = groups.universal_scalar(alg)
        _require(a == want, f"{name}: universal scalar {a}, expected {want}")
        for _ in range(200):
            x = tuple(a * v for v in _rand_int_vec(rng, alg.dim, -5, 5))
            y = tuple(a * v for v in _rand_int_vec(rng, alg.dim, -5, 5))
            prod = groups.bch(alg, x, y)
            _require(all((c / a).denominator == 1 for c in prod),
                     f"{name}: rescaled lattice not closed under *")
    return "scalars (g2, h3, n3, k4) = (1, 2, 2, 6); lattice closed on 200 pairs each"


# -- orbits suite ------------------------------------------------------------


def check_even_rank(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        for _ in range(200):
            ell = _rand_vec(rng, alg.dim)
            _require(orbits.orbit_dim(alg, ell) % 2 == 0, f"{name}: odd B_ell rank")
    return "rank(B_ell) even on 200 samples per algebra"


def check_vergne(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        basis = orbits.standard_strong_basis(alg)
        for _ in range(200):
            ell = _rand_vec(rng, alg.dim)
            pol = orbits.vergne_polarization(alg, ell, basis)  # verifies its own contract
            r = orbits.radical(alg, ell).dim
            _require(pol.dim == r + (alg.dim - r) // 2, f"{name}: polarization dimension")
    return "isotropy, closure and dimension on 200 samples per algebra"


def check_stratum_invariance(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        basis = orbits.standard_strong_basis(alg)
        for _ in range(100):
            ell = _rand_vec(rng, alg.dim)
            d0 = orbits.d_vector(alg, ell, basis).d
            moved = orbits.random_orbit_point(alg, ell, rng)
            _require(orbits.d_vector(alg, moved, basis).d == d0, f"{name}: d-vector moved")
    return "d-vector constant along orbits (100 samples per algebra)"


def check_representative(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        basis = orbits.standard_strong_basis(alg)
        for _ in range(50):
            ell = _rand_vec(rng, alg.dim)
            rep = orbits.orbit_representative(alg, ell, basis)
            _require(orbits.orbit_representative(alg, rep, basis) == rep, f"{name}: not idempotent")
            for _ in range(10):
                moved = orbits.random_orbit_point(alg, ell, rng)
                _require(orbits.orbit_representative(alg, moved, basis) == rep,
                         f"{name}: representative not orbit-constant")
    return "cross-section idempotent and orbit-constant (50 ells x 10 actions)"


def check_pfaffian(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        basis = orbits.standard_strong_basis(alg)
        for _ in range(200):
            ell = _rand_vec(rng, alg.dim)
            st = orbits.d_vector(alg, ell, basis)
            pf = orbits.pfaffian(alg, ell, st, basis)
            block = tuple(
                tuple(linalg.dot(ell, alg.bracket(basis.vectors[a - 1], basis.vectors[b - 1])) for b in st.I)
                for a in st.I
            )
            _require(pf * pf == _det(block), f"{name}: Pf^2 != det")
            moved = orbits.random_orbit_point(alg, ell, rng)
            _require(orbits.pfaffian(alg, moved, orbits.d_vector(alg, moved, basis), basis) == pf,
                     f"{name}: Pf not Ad*-invariant")
    return "Pf^2 = det and Ad*-invariance on 200 samples per algebra"


def check_separation(seed):
    rng = random.Random(seed)
    alg = data.load_algebra("h3")
    invs = data.load_invariants("h3_invariants")
    basis = orbits.standard_strong_basis(alg)
    for _ in range(100):
        a = _rand_vec(rng, 3)
        b = _rand_vec(rng, 3)
        if a[0] == 0 or b[0] == 0:
            continue
        if invs[0].evaluate(a) != invs[0].evaluate(b):
            _require(orbits.orbit_representative(alg, a, basis) != orbits.orbit_representative(alg, b, basis),
                     "h3: distinct invariants, same orbit")
    return "distinct invariant values imply distinct generic orbits (h3)"


def _det(m) -> Fraction:
    n = len(m)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for j in range(n):
        if m[0][j] == 0:
            continue
        sub = tuple(tuple(m[a][b] for b in range(n) if b != j) for a in range(1, n))
        total += Fraction(-1) ** j * m[0][j] * _det(sub)
    return total


# -- envelope suite ----------------------------------------------------------


def check_pbw_confluence(seed):
    rng = random.Random(seed)
    for name in NONABELIAN:
        alg = data.load_algebra(name)
        for _ in range(100):
            w = tuple(rng.randrange(alg.dim) for _ in range(rng.randint(0, 6)))
            _require(envelope.normal_order(alg, w, "first") == envelope.normal_order(alg, w, "last"),
                     f"{name}: rewrite strategies disagree on {w}")
    return "both strategies agree on 100 random words per algebra"


def check_central_invariants(seed):
    for name, inv_name in data.INVARIANT_SETS.items():
        alg = data.load_algebra(name)
        for p in data.load_invariants(inv_name):
            _require(envelope.is_central(envelope.symmetrize(alg, p)),
                     f"{name}: symmetrized invariant not central")
    return "symmetrize of every shipped separating polynomial is central"


def check_eigenvalue_orbit_constant(seed):
    rng = random.Random(seed)
    for name, inv_name in data.INVARIANT_SETS.items():
        alg = data.load_algebra(name)
        polys = data.load_invariants(inv_name)
        for _ in range(50):
            ell = _rand_vec(rng, alg.dim)
            for p in polys:
                v0 = envelope.scalar_eigenvalue(alg, p, ell, seed=seed)
                moved = orbits.random_orbit_point(alg, ell, rng)
                v1 = envelope.scalar_eigenvalue(alg, p, moved, seed=seed)
                _require(v0 == v1, f"{name}: eigenvalue moved along the orbit")
    return "scalar eigenvalues orbit-constant (50 ells per algebra)"


# -- geometry suite ----------------------------------------------------------


def check_models_valid(seed):
    for name in data.SHIPPED_MODELS:
        m = data.load_model(name)
        report = validate_model(m)
        _require(report["ok"], f"{name}: {report['violations']}")
    return "all shipped models pass their polynomial identities"


def check_abc(seed):
    rng = random.Random(seed)
    for name in data.SHIPPED_MODELS:
        m = data.load_model(name)
        mk = anticanonical_class(m)
        a, b, c, cc = abc_invariants(m, mk)
        _require(a == 1 and b == m.rank, f"{name}: anticanonical abc wrong")
        for _ in range(20):
            l = DivisorClass({al: Fraction(rng.randint(1, 9), rng.choice((1, 2))) for al in m.boundary})
            a1, b1, c1, _ = abc_invariants(m, l)
            t = Fraction(rng.randint(1, 5), rng.randint(1, 3))
            a2, b2, c2, _ = abc_invariants(m, DivisorClass({al: t * v for al, v in l.l.items()}))
            _require(a2 == a1 / t and b2 == b1 and c2 == c1, f"{name}: scaling law failed")
            _require(b1 >= 1, f"{name}: b < 1")
    return "b >= 1, scaling law, anticanonical case on all models"


def check_pole_drop_data(seed):
    for fname in data.SHIPPED_F_DATA:
        f = data.load_f_divisor(fname)
        m = data.load_model(f.model)
        a0, degenerate = twist_pole_set(m, f)
        _require(not degenerate and len(a0) < m.rank, f"{fname}: no strict pole drop")
    return "every shipped twist datum has |A_0(f)| < #A"


def check_lex_drop(seed):
    import json

    m = data.load_model("p3")
    a_x, b_x, _, _ = abc_invariants(m, anticanonical_class(m))
    sub = data.load_model("p3_center_closure")
    with open(data.resolve("p3_center_closure"), "r", encoding="utf-8") as fh:
        restricted = json.load(fh)["restricted_class"]
    a_y, b_y, _, _ = abc_invariants(sub, DivisorClass.from_list(sub, restricted))
    _require((a_y, b_y) == (Fraction(1, 2), 1), "center closure: expected (1/2, 1)")
    _require((a_y, b_y) < (a_x, b_x), "no lexicographic drop")
    return "(a, b) drops to (1/2, 1) on the center closure of the p3 model"


# -- zeta suite --------------------------------------------------------------


def check_local_oracle(seed):
    from itertools import product as iproduct

    for name in data.SHIPPED_MODELS:
        m = data.load_model(name)
        for p in (5, 7, 11):
            for offs in iproduct((0, 1, 2), repeat=m.rank):
                s = {a: m.kappa[a] + o for a, o in zip(m.boundary, offs)}
                lhs = zeta.local_height_integral(m, p, s).value
                rhs = zeta.residue_class_integral(m, p, s, depth=3)
                _require(lhs == rhs, f"{name} p={p} s={s}: formula != oracle")
    return "formula == depth-3 residue oracle on all models, p in {5,7,11}, full s-grid"


def check_regularization(seed):
    for name in data.SHIPPED_MODELS:
        m = data.load_model(name)
        worst = 0.0
        for p in zeta.primes_up_to(10000):
            p = int(p)
            if p in m.bad_primes:
                continue
            f = float(zeta.regularized_local_factor(m, p))
            worst = max(worst, abs(f - 1.0) * p * p)
        _require(worst < 16.0, f"{name}: regularized factor not 1 + O(1/p^2), C = {worst}")
    return "(1-1/p)^#A * I_p(kappa) = 1 + O(1/p^2) up to p = 10^4"


def check_twisted_drop(seed):
    for fname in data.SHIPPED_F_DATA:
        f = data.load_f_divisor(fname)
        m = data.load_model(f.model)
        partials = zeta.twisted_partial_products(m, f, prime_bound=1000)
        tail = [v for _, v in partials[-20:]]
        _require(max(tail) - min(tail) < 1e-4, f"{fname}: twisted partial products not Cauchy")
        raw = zeta.untwisted_partial_products(m, prime_bound=1000)
        ref = zeta.mertens_reference(1000, m.rank)
        ratios = {p: v for p, v in raw}
        refs = {p: v for p, v in ref}
        r100 = ratios[97] / refs[97]
        r1000 = ratios[997] / refs[997]
        _require(abs(r1000 / r100 - 1.0) < 0.05, f"{fname}: untwisted divergence rate off")
    return "twisted products Cauchy; untwisted track the Mertens divergence within 5%"


def check_unit_volume_limit(seed):
    for name in data.SHIPPED_MODELS:
        m = data.load_model(name)
        for p in (5, 11):
            near = zeta.local_height_integral(m, p, {a: m.kappa[a] + 20 for a in m.boundary}).value
            nearer = zeta.local_height_integral(m, p, {a: m.kappa[a] + 40 for a in m.boundary}).value
            _require(abs(nearer - 1) < abs(near - 1) and abs(nearer - 1) < Fraction(1, 10**12),
                     f"{name}: local factor does not approach vol(G(Z_p)) = 1")
    return "s -> infinity limit reproduces vol(G(Z_p)) = 1"


def check_character_sums(seed):
    for p in (2, 3, 5, 7, 11, 13):
        for mval in range(0, 5):
            _require(zeta.twisted_unit_integral(p, mval) == zeta.character_sum_unit_integral(p, mval),
                     f"unit integral mismatch at p={p}, m={mval}")
    return "closed unit integrals == cyclotomic character sums (p <= 13, m <= 4)"


# -- counting suite ----------------------------------------------------------


def check_count_monotone(seed):
    m = data.load_model("p1")
    prev = -1
    for b in (10, 100, 1000, 10000):
        n = counting.enumerate_points(m, b)
        _require(n >= prev, "N(B) not monotone")
        prev = n
    return "N(B) nondecreasing on p1"


def check_enumeration_complete(seed):
    for name in data.SHIPPED_MODELS:
        m = data.load_model(name)
        b = {"p1": 400, "p2": 300, "p3": 60, "blowup_p2": 150}[name]
        fast = counting.enumerate_points(m, b)
        slow = _oversized_box_count(m, b)
        _require(fast == slow, f"{name}: box enumeration missed points at B={b}")
    return "kernel counts equal brute force over a strictly larger box"


def _oversized_box_count(m, bound):
    t = counting.box_side(m, bound) + 3
    total = 0

    def rec(prefix, k):
        nonlocal total
        if k == m.dim + 1:
            g = 0
            for v in prefix:
                g = math.gcd(g, v)
            if g == 1 and counting.height(m, prefix) <= bound:
                total += 1
            return
        for v in range(-t, t + 1):
            rec(prefix + (v,), k + 1)

    for w in range(1, t + 1):
        rec((w,), 1)
    return total


def check_heisenberg_shadow(seed):
    m = data.load_model("p3")
    bound = 256
    additive = set()
    t = counting.box_side(m, bound)
    for w in range(1, t + 1):
        for a in range(-t, t + 1):
            for b in range(-t, t + 1):
                for c in range(-t, t + 1):
                    if math.gcd(math.gcd(w, a), math.gcd(b, c)) == 1 and counting.height(m, (w, a, b, c)) <= bound:
                        additive.add((w, a, b, c))
    via_group = {counting.heisenberg_embed(*counting.heisenberg_coords(pt)) for pt in additive}
    _require(via_group == additive, "Heisenberg parametrization changed the point set")
    return f"N({bound}) identical through additive and Heisenberg coordinates ({len(additive)} points)"


def check_translation_sanity(seed):
    m = data.load_model("p1")
    bound = 10**6
    n = counting.enumerate_points(m, bound)
    for c in (-7, -1, 1, 3, 12):
        n_c = counting.count_translated_p1(bound, c)
        _require(abs(n_c / n - 1.0) <= 0.05, f"translation by {c}: ratio {n_c / n}")
    return "left translations keep N within 5% at B = 10^6 (p1)"


# -- registry ---------------------------------------------------------------

SUITES = {
    "algebra": [
        ("series-ideals", check_series_are_ideals),
        ("strong-malcev-prefixes", check_strong_malcev_prefixes),
        ("kirillov-quadruples", check_kirillov_quadruples),
        ("centralizer-center", check_centralizer_center),
    ],
    "groups": [
        ("bch-associativity", check_bch_associativity),
        ("bch-matrix-oracle", check_bch_matrix_oracle),
        ("group-inverse", check_group_inverse),
        ("universal-scalars", check_universal_scalars),
    ],
    "orbits": [
        ("even-rank", check_even_rank),
        ("vergne-certificate", check_vergne),
        ("stratum-invariance", check_stratum_invariance),
        ("cross-section", check_representative),
        ("pfaffian", check_pfaffian),
        ("orbit-separation", check_separation),
    ],
    "envelope": [
        ("pbw-confluence", check_pbw_confluence),
        ("central-invariants", check_central_invariants),
        ("eigenvalue-orbit-constant", check_eigenvalue_orbit_constant),
    ],
    "geometry": [
        ("model-validation", check_models_valid),
        ("abc-invariants", check_abc),
        ("pole-drop-data", check_pole_drop_data),
        ("lexicographic-drop", check_lex_drop),
    ],
    "zeta": [
        ("local-oracle", check_local_oracle),
        ("regularization", check_regularization),
        ("character-sums", check_character_sums),
        ("twisted-drop", check_twisted_drop),
        ("unit-volume-limit", check_unit_volume_limit),
    ],
    "counting": [
        ("monotone", check_count_monotone),
        ("enumeration-complete", check_enumeration_complete),
        ("heisenberg-shadow", check_heisenberg_shadow),
        ("translation-sanity", check_translation_sanity),
    ],
}


def run_suite(suite: str, seed: int = 0) -> list[dict]:
    if suite == "all":
        names = list(SUITES)
    elif suite in SUITES:
        names = [suite]
    else:
        raise KeyError(f"unknown suite {suite!r}; choose from {sorted(SUITES)} or 'all'")
    results = []
    for sname in names:
        for cname, fn in SUITES[sname]:
            detail = fn(seed)
            results.append({"suite": sname, "check": cname, "ok": True, "detail": detail})
    return results
