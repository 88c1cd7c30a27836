"""Combinatorial geometry of the shipped equivariant compactifications.

Models are data, not computed from equations: each ships its boundary index
set, anticanonical multiplicities, and stratified point-count polynomials in
q, which are validated as polynomial identities on load.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod

from .algebra import PreconditionError


class ModelError(ValueError):
    """Invalid compactification-model data."""


class QPoly(tuple):
    """Integer-coefficient polynomial in q as an ascending coefficient tuple."""

    def __new__(cls, coeffs=()):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return super().__new__(cls, c)

    def __add__(self, other):
        other = QPoly(other)
        n = max(len(self), len(other))
        return QPoly([ (self[i] if i < len(self) else 0) + (other[i] if i < len(other) else 0) for i in range(n) ])

    def __call__(self, q):
        out = 0
        for c in reversed(self):
            out = out * q + c
        return out

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1):
        return cls([0] * degree + [coeff])


def _strata_key(labels) -> tuple[str, ...]:
    return tuple(sorted(labels))


@dataclass(frozen=True)
class CompactificationModel:
    name: str
    dim: int
    boundary: tuple[str, ...]
    kappa: dict[str, int]
    strata: dict[tuple[str, ...], QPoly]
    total: QPoly
    height_kind: str
    bad_primes: frozenset[int]
    group: str = ""

    @property
    def rank(self) -> int:
        return len(self.boundary)

    def stratum_count(self, subset) -> QPoly:
        return self.strata.get(_strata_key(subset), QPoly())

    @classmethod
    def from_dict(cls, data: dict) -> "CompactificationModel":
        try:
            strata = {}
            for key, coeffs in data["strata"].items():
                labels = tuple(s for s in key.split(",") if s)
                strata[_strata_key(labels)] = QPoly(coeffs)
            m = cls(
                name=data["name"],
                dim=data["dim"],
                boundary=tuple(data["boundary"]),
                kappa={k: int(v) for k, v in data["kappa"].items()},
                strata=strata,
                total=QPoly(data["total"]),
                height_kind=data["height"],
                bad_primes=frozenset(data.get("bad_primes", [])),
                group=data.get("group", ""),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ModelError(f"malformed model file: {exc}") from None
        report = validate_model(m)
        if not report["ok"]:
            raise ModelError("model validation failed: " + "; ".join(report["violations"]))
        return m

    @classmethod
    def from_file(cls, path) -> "CompactificationModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def validate_model(m: CompactificationModel) -> dict:
    """Check the three model invariants as polynomial identities in q."""
    violations = []
    for alpha in m.boundary:
        if alpha not in m.kappa:
            violations.append(f"missing kappa for {alpha}")
        elif m.kappa[alpha] < 2:
            violations.append(f"kappa[{alpha}] = {m.kappa[alpha]} < 2")
    open_orbit = m.stratum_count(())
    if open_orbit != QPoly.monomial(m.dim):
        violations.append("open-orbit stratum count is not q^dim")
    total = QPoly()
    for subset, poly in m.strata.items():
        unknown = set(subset) - set(m.boundary)
        if unknown:
            violations.append(f"stratum over unknown boundary labels {sorted(unknown)}")
        total = total + poly
    if total != m.total:
        violations.append("strata counts do not sum to the total point count")
    return {"ok": not violations, "violations": violations}


@dataclass(frozen=True)
class DivisorClass:
    """Class in Pic(X) in the boundary basis; effective iff all entries >= 0."""

    l: dict[str, Fraction]

    @classmethod
    def from_list(cls, m: CompactificationModel, entries) -> "DivisorClass":
        return cls({a: Fraction(e) for a, e in zip(m.boundary, entries, strict=True)})

    def is_effective(self) -> bool:
        return all(v >= 0 for v in self.l.values())


def anticanonical_class(m: CompactificationModel) -> DivisorClass:
    return DivisorClass({a: Fraction(m.kappa[a]) for a in m.boundary})


def abc_invariants(m: CompactificationModel, L: DivisorClass):
    """(a, b, C, c): a = max kappa/l, b = #{alpha achieving it},
    C = the others, c = prod of l_alpha^{-1} over the achievers.  Exact.
    """
    if set(L.l) != set(m.boundary):
        raise PreconditionError("divisor class does not match the boundary index set")
    if any(v <= 0 for v in L.l.values()):
        raise PreconditionError("abc invariants need l_alpha > 0 for all alpha")
    ratios = {alpha: Fraction(m.kappa[alpha]) / L.l[alpha] for alpha in m.boundary}
    a = max(ratios.values())
    achievers = [alpha for alpha in m.boundary if ratios[alpha] == a]
    C = tuple(alpha for alpha in m.boundary if ratios[alpha] != a)
    c = prod((Fraction(1) / L.l[alpha] for alpha in achievers), start=Fraction(1))
    return a, len(achievers), C, c


@dataclass(frozen=True)
class RationalFunctionDivisor:
    """Boundary pole data of a rational function f on G:
    div(f) = E(f) - sum_alpha d_alpha D_alpha, with stratified counts of how
    the zero component E(f) meets each open boundary stratum.
    """

    name: str
    model: str
    d: dict[str, int]
    has_zero_component: bool = True
    e_meets: dict[str, QPoly] = field(default_factory=dict)

    def __post_init__(self):
        if any(v < 0 for v in self.d.values()):
            raise ModelError("pole multiplicities d_alpha must be >= 0")

    @classmethod
    def from_dict(cls, data: dict) -> "RationalFunctionDivisor":
        return cls(
            name=data["name"],
            model=data["model"],
            d={k: int(v) for k, v in data["d"].items()},
            has_zero_component=bool(data.get("zero_component", True)),
            e_meets={k: QPoly(v) for k, v in data.get("e_meets", {}).items()},
        )

    @classmethod
    def from_file(cls, path) -> "RationalFunctionDivisor":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_dict(json.load(fh))


def twist_pole_set(m: CompactificationModel, f: RationalFunctionDivisor) -> tuple[tuple[str, ...], bool]:
    """A_0(f) = {alpha : d_alpha = 0}; the twisted Euler product's pole order.

    Returns (A_0, degenerate) where degenerate flags the all-zero d-vector
    (A_0 = A, i.e. no twist at all).
    """
    a0 = tuple(alpha for alpha in m.boundary if f.d.get(alpha, 0) == 0)
    return a0, len(a0) == len(m.boundary)
