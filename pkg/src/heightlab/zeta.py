"""Local and global height zeta evaluation.

The residue-class formula for good primes,

    q^-n * sum_{A subset of boundary} |D_A^0(F_q)| * prod_{a in A} (q-1)/(q^{s_a-kappa_a+1}-1),

is evaluated exactly for integer s.  An independent oracle integrates the
affine height directly over valuation shells whose volumes are obtained by
counting residue classes mod p^depth, with exact geometric tails; bad-prime
factors are taken from that oracle at depth 4.  Twisted factors follow the
three-case residue-class assembly, exact on the open orbit and on
codimension-1 strata off the zero component, with deeper strata included at
their untwisted value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from .algebra import PreconditionError
from .geometry import CompactificationModel, RationalFunctionDivisor, twist_pole_set
from .linalg import ZERO, ONE


class ZetaError(ValueError):
    pass


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def primes_up_to(limit: int) -> np.ndarray:
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.nonzero(sieve)[0].astype(np.int64)


def anticanonical_s(m: CompactificationModel) -> dict[str, Fraction]:
    return {a: Fraction(m.kappa[a]) for a in m.boundary}


def normalize_s(m: CompactificationModel, s) -> dict[str, Fraction]:
    if isinstance(s, dict):
        out = {a: Fraction(v) for a, v in s.items()}
    elif isinstance(s, (int, Fraction)):
        if m.rank != 1:
            raise PreconditionError("scalar s is ambiguous for rank > 1; pass one value per boundary component")
        out = {m.boundary[0]: Fraction(s)}
    else:
        out = {a: Fraction(v) for a, v in zip(m.boundary, s, strict=True)}
    if set(out) != set(m.boundary):
        raise PreconditionError("s must assign a value to every boundary component")
    return out


def _check_convergent(m: CompactificationModel, s: dict[str, Fraction]):
    for a in m.boundary:
        if s[a] <= m.kappa[a] - 1:
            raise PreconditionError(
                f"s_{a} = {s[a]} is outside the convergence domain (needs > {m.kappa[a] - 1})"
            )


@dataclass(frozen=True)
class LocalFactorValue:
    value: Fraction
    q: int
    s: dict[str, Fraction] = field(default_factory=dict, compare=False)

    @property
    def as_float(self) -> float:
        return float(self.value)


def local_height_integral(m: CompactificationModel, p: int, s) -> LocalFactorValue:
    """Closed-formula local height integral at a good prime, exact for integer s."""
    s = normalize_s(m, s)
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if p in m.bad_primes:
        raise PreconditionError(f"{p} is a bad prime for model {m.name}")
    _check_convergent(m, s)
    return LocalFactorValue(_formula_value(m, p, s), p, s)


def _formula_value(m: CompactificationModel, q: int, s: dict[str, Fraction]) -> Fraction:
    for a in m.boundary:
        if s[a].denominator != 1:
            raise PreconditionError("exact evaluation needs integer s")
    total = ZERO
    labels = m.boundary
    for r in range(len(labels) + 1):
        for subset in combinations(labels, r):
            count = m.stratum_count(subset)
            if not count:
                continue
            term = Fraction(count(q))
            for a in subset:
                term *= Fraction(q - 1, q ** int(s[a] - m.kappa[a] + 1) - 1)
            total += term
    return total / Fraction(q) ** m.dim


# ---------------------------------------------------------------------------
# residue-class oracle


def _unit_volume(p: int, depth: int) -> Fraction:
    count = sum(1 for a in range(p**depth) if a % p != 0)
    return Fraction(count, p**depth)


def _geom(t: Fraction, m0: int) -> Fraction:
    """sum_{m >= m0} t^m, exact; requires 0 <= t < 1."""
    if not 0 <= t < 1:
        raise PreconditionError("geometric tail outside the convergence domain")
    return t**m0 / (1 - t)


def residue_class_integral(m: CompactificationModel, p: int, s, depth: int = 3) -> Fraction:
    """Direct integration of the affine height over G(Q_p).

    Coordinates are split into valuation shells |x| = p^e; shell volumes come
    from counting residue classes mod p^depth plus the Haar scaling axiom, and
    shells beyond the depth are summed as exact geometric tails.  Uses only
    the model's height kind, never its stratified point counts.
    """
    s = normalize_s(m, s)
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    _check_convergent(m, s)
    u = _unit_volume(p, depth)

    def vol(e: int) -> Fraction:
        return ONE if e == 0 else Fraction(p) ** e * u

    if m.height_kind == "projective":
        n = m.dim
        sv = int(s[m.boundary[0]])
        total = ZERO
        for es in product(range(depth), repeat=n):
            total += math.prod((vol(e) for e in es), start=ONE) * Fraction(p) ** (-sv * max(es))
        # covers max(e) <= depth-1; the rest is a single geometric tail
        t = Fraction(p) ** (n - sv)
        total += (1 - Fraction(p) ** (-n)) * _geom(t, depth) * 1
        return total

    if m.height_kind == "blowup_p2":
        # boundary order convention: (strict transform, exceptional)
        s1 = int(s[m.boundary[0]])
        s2 = int(s[m.boundary[1]])
        q = Fraction(p)
        total = ZERO
        for e1 in range(depth):
            for e2 in range(depth):
                w = q ** (-(s1 * e1 + s2 * max(0, e2 - e1)))
                total += vol(e1) * vol(e2) * w
        g2 = _geom(q ** (1 - s2), depth)       # e2 >= depth, e1 < depth (so e2 > e1)
        for e1 in range(depth):
            total += vol(e1) * q ** (-(s1 - s2) * e1) * u * g2
        total += u * _geom(q ** (2 - s1), depth)                      # e1 >= depth, e2 <= e1
        total += u * u * _geom(q ** (2 - s1), depth) * _geom(q ** (1 - s2), 1)  # e2 > e1 >= depth
        return total

    raise ZetaError(f"no oracle for height kind {m.height_kind!r}")


def bad_prime_factor(m: CompactificationModel, p: int, s, depth: int = 4) -> Fraction:
    """Exact local factor at a shipped bad prime, from the oracle at depth 4."""
    if p not in m.bad_primes:
        raise PreconditionError(f"{p} is not in the bad-prime set of {m.name}")
    return residue_class_integral(m, p, s, depth=depth)


# ---------------------------------------------------------------------------
# twisted factors


def twisted_unit_integral(p: int, mval: int) -> Fraction:
    """Integral over Z_p^* of the standard character at conductor exponent m,
    with vol(Z_p) = 1: (1 - 1/p) for m = 0, -1/p for m = 1, 0 for m >= 2."""
    if mval < 0:
        raise PreconditionError("conductor exponent must be nonnegative")
    if mval == 0:
        return 1 - Fraction(1, p)
    if mval == 1:
        return Fraction(-1, p)
    return ZERO


def character_sum_unit_integral(p: int, mval: int) -> Fraction:
    """Brute-force oracle for twisted_unit_integral: the literal character sum
    over (Z/p^m)^*, reduced exactly in the cyclotomic field Q(zeta_{p^m}).

    The sum of zeta^u over units is represented as an integer polynomial and
    reduced mod the cyclotomic polynomial of level p^m; the remainder is a
    rational constant, returned divided by p^m.
    """
    if mval == 0:
        units = sum(1 for a in range(p) if a % p != 0)
        return Fraction(units, p)
    n = p**mval
    coeffs = [0] * n
    for ures in range(n):
        if ures % p != 0:
            coeffs[ures] += 1
    # cyclotomic polynomial of p^m: sum_{i<p} x^(i * p^(m-1))
    step = p ** (mval - 1)
    phi = step * (p - 1)
    for t in range(n - 1, phi - 1, -1):
        c = coeffs[t]
        if c == 0:
            continue
        coeffs[t] = 0
        base = t - phi
        for i in range(p - 1):
            coeffs[base + i * step] -= c
        coeffs[t] += c * 0
    if any(coeffs[1:phi]):
        raise ZetaError("character sum did not reduce to a constant")
    return Fraction(coeffs[0], n)


def _case2_series(q: int, sigma: Fraction, d: int) -> Fraction:
    """sum_{n >= 1} q^{-(1+sigma) n} * (unit integral at conductor n*d)."""
    if d == 0:
        return (1 - Fraction(1, q)) * Fraction(1, q ** int(1 + sigma) - 1)
    if d == 1:
        return Fraction(-1, q) * Fraction(q) ** (-int(1 + sigma))
    return ZERO


def twisted_local_factor(m: CompactificationModel, f: RationalFunctionDivisor,
                         p: int, s) -> LocalFactorValue:
    """Local height integral against the additive character attached to f.

    Case 1 (open orbit) contributes exactly 1; Case 2 (codimension-1 strata
    off the zero component of f) contributes the geometric series weighted by
    the twisted unit integral at conductor n_alpha * d_alpha; Case 3 (deeper
    strata and strata on the zero component) is included at its untwisted
    value.
    """
    s = normalize_s(m, s)
    if not is_prime(p):
        raise PreconditionError(f"{p} is not prime")
    if p in m.bad_primes:
        raise PreconditionError(f"{p} is a bad prime for model {m.name}")
    _check_convergent(m, s)
    q = p
    n = m.dim
    sigma = {a: s[a] - m.kappa[a] for a in m.boundary}
    geom = {a: Fraction(q - 1, q ** int(1 + sigma[a]) - 1) for a in m.boundary}
    value = Fraction(1)
    for a in m.boundary:
        stratum = m.stratum_count((a,))(q)
        on_e = f.e_meets.get(a, None)
        on_e_count = on_e(q) if on_e is not None else 0
        off_e = stratum - on_e_count
        if off_e < 0:
            raise ZetaError(f"zero-component count exceeds the stratum on {a}")
        d_a = f.d.get(a, 0)
        value += off_e * Fraction(q) ** (-(n - 1)) * _case2_series(q, sigma[a], d_a)
        value += on_e_count * Fraction(q) ** (-n) * geom[a]
    for r in range(2, len(m.boundary) + 1):
        for subset in combinations(m.boundary, r):
            count = m.stratum_count(subset)
            if not count:
                continue
            term = Fraction(count(q)) * Fraction(q) ** (-n)
            for a in subset:
                term *= geom[a]
            value += term
    return LocalFactorValue(value, p, s)


# ---------------------------------------------------------------------------
# archimedean density


def arch_height_inverse(m: CompactificationModel, s: dict[str, Fraction], x) -> float:
    """H_infty(s; x)^{-1} on G(R) = R^n for the shipped height kinds."""
    if m.height_kind == "projective":
        h = max(1.0, *(abs(float(v)) for v in x))
        return h ** (-float(s[m.boundary[0]]))
    if m.height_kind == "blowup_p2":
        h1 = max(1.0, abs(float(x[0])))
        h2 = max(h1, abs(float(x[1]))) / h1
        return h1 ** (-float(s[m.boundary[0]])) * h2 ** (-float(s[m.boundary[1]]))
    raise ZetaError(f"no archimedean height for kind {m.height_kind!r}")


def _arch_regions(m: CompactificationModel, s: dict[str, Fraction]):
    """Cells for the archimedean integral, each pulled back to the unit cube
    with a smooth power integrand.  Cells resolve which coordinate carries the
    max, with inverted coordinates u = 1/|x|, so no cell has a singularity.
    """
    n = m.dim
    if m.height_kind == "projective":
        sv = float(s[m.boundary[0]])
        cells = [(n, 2.0**n, lambda *u: 1.0)]
        # |x_i| maximal and > 1; the others scaled into [-1, 1]
        cells.append((n, n * 2.0**n, lambda *u, e=sv - n - 1: u[0] ** e))
        return cells
    if m.height_kind == "blowup_p2":
        s1 = float(s[m.boundary[0]])
        s2 = float(s[m.boundary[1]])
        return [
            (2, 4.0, lambda u, w: 1.0),                                  # |x|,|y| <= 1
            (2, 4.0, lambda u, w, e=s2 - 2: u**e),                       # |x| <= 1 < |y| = 1/u
            (2, 4.0, lambda u, w, e=s1 - 3: u**e),                       # |y| <= |x| = 1/u, |x| > 1
            (2, 4.0, lambda u, w, e1=s1 - 3, e2=s2 - 2: u**e1 * w**e2),  # |y| = |x|/w > |x| > 1
        ]
    raise ZetaError(f"no archimedean height for kind {m.height_kind!r}")


def archimedean_density(m: CompactificationModel, rel_tol: float = 1e-8) -> float:
    """Integral of H_infty(kappa; x)^{-1} over R^n by adaptive quadrature.

    The integrand is even in every coordinate and piecewise monomial once the
    maxima are resolved, so the region decomposition of _arch_regions turns
    every cell into a smooth integral over the unit cube.
    """
    import warnings

    from scipy import integrate

    total = 0.0
    for ndim, mult, integrand in _arch_regions(m, anticanonical_s(m)):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                val, _err = integrate.nquad(
                    integrand,
                    [(0.0, 1.0)] * ndim,
                    opts={"epsabs": rel_tol, "epsrel": rel_tol, "limit": 200},
                )
            except integrate.IntegrationWarning as exc:
                raise ZetaError(f"archimedean quadrature did not converge: {exc}") from None
        total += mult * val
    return total


# ---------------------------------------------------------------------------
# Euler products


@dataclass
class EulerEstimate:
    tau: float
    pole_order: int
    truncation_prime: int
    arch_density: float
    tail_heuristic: float
    kappa_line_factor: float
    finite_product: float
    factors_sample: dict[int, float]


def regularized_local_factor(m: CompactificationModel, p: int, s=None) -> Fraction:
    """(1 - 1/p)^{#A} times the local integral at s (default kappa); exact."""
    s = anticanonical_s(m) if s is None else normalize_s(m, s)
    if p in m.bad_primes:
        base = bad_prime_factor(m, p, s)
    else:
        base = _formula_value(m, p, s)
    return (1 - Fraction(1, p)) ** m.rank * base


def euler_leading_constant(m: CompactificationModel, prime_bound: int) -> EulerEstimate:
    """Leading constant of the one-parameter height zeta function on the
    anticanonical line: the archimedean density times the zeta-regularized
    finite product, divided by prod kappa_alpha (the Jacobian between the
    multiparameter residue at kappa and the single-variable pole at s = 1).
    N(B) is then predicted to be ~ tau/(b-1)! * B * log(B)^{b-1}.
    """
    if prime_bound < 100:
        raise PreconditionError("prime bound must be at least 100")
    s = anticanonical_s(m)
    logs = []
    sample: dict[int, float] = {}
    c_fit = 0.0
    for p in primes_up_to(prime_bound):
        p = int(p)
        factor = float(regularized_local_factor(m, p, s))
        logs.append(math.log(factor))
        if p <= 13 or p >= prime_bound // 2:
            sample[p] = factor
        if p >= 5:
            c_fit = max(c_fit, abs(factor - 1.0) * p * p)
    finite = math.exp(math.fsum(logs))
    arch = archimedean_density(m)
    kappa_line = 1.0
    for a in m.boundary:
        kappa_line *= m.kappa[a]
    tau = arch * finite / kappa_line
    tail = 3.0 * tau * c_fit / (prime_bound * math.log(prime_bound))
    return EulerEstimate(
        tau=tau,
        pole_order=m.rank,
        truncation_prime=prime_bound,
        arch_density=arch,
        tail_heuristic=tail,
        kappa_line_factor=kappa_line,
        finite_product=finite,
        factors_sample=sample,
    )


def twisted_partial_products(m: CompactificationModel, f: RationalFunctionDivisor,
                             s=None, prime_bound: int = 1000) -> list[tuple[int, float]]:
    """Partial products of the regularized twisted Euler factors, in ascending
    prime order.  Regularization multiplies by (1 - 1/p)^{|A_0(f)|}, matching
    the zeta factors that survive the twist."""
    s = anticanonical_s(m) if s is None else normalize_s(m, s)
    a0, _ = twist_pole_set(m, f)
    out = []
    acc = 0.0
    for p in primes_up_to(prime_bound):
        p = int(p)
        if p in m.bad_primes:
            continue
        factor = float(twisted_local_factor(m, f, p, s).value) * (1 - 1 / p) ** len(a0)
        if factor <= 0:
            raise ZetaError(f"twisted factor vanished at p={p}")
        acc += math.log(factor)
        out.append((p, math.exp(acc)))
    return out


def untwisted_partial_products(m: CompactificationModel, s=None,
                               prime_bound: int = 1000) -> list[tuple[int, float]]:
    """Raw (unregularized) partial products of the local integrals."""
    s = anticanonical_s(m) if s is None else normalize_s(m, s)
    out = []
    acc = 0.0
    for p in primes_up_to(prime_bound):
        p = int(p)
        value = bad_prime_factor(m, p, s) if p in m.bad_primes else _formula_value(m, p, s)
        acc += math.log(float(value))
        out.append((p, math.exp(acc)))
    return out


def mertens_reference(prime_bound: int, rank: int) -> list[tuple[int, float]]:
    """Partial products of (1 - 1/p)^{-rank}, the predicted divergence rate."""
    out = []
    acc = 0.0
    for p in primes_up_to(prime_bound):
        acc -= rank * math.log(1 - 1 / int(p))
        out.append((int(p), math.exp(acc)))
    return out
