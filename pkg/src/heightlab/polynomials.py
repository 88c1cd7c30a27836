"""Sparse polynomials on the dual space g*, with exact rational coefficients.

Monomials are exponent tuples of length n; a polynomial is a mapping from
exponent tuples to coefficients.  This is the shared format for
orbit-separating invariant sets and for symbols of enveloping-algebra
elements (F[g*] = S(g) under the trace pairing).
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

from . import linalg
from .linalg import Mat, Vec, ZERO, ONE


class DualPolynomial:
    """Element of Q[g*] as a finitely supported exponent-to-coefficient map."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        self.nvars = nvars
        self.terms: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for e, c in terms.items():
                c = Fraction(c)
                if c != 0:
                    if len(e) != nvars:
                        raise ValueError("exponent vector has wrong length")
                    self.terms[tuple(int(x) for x in e)] = c

    # -- constructors --------------------------------------------------------

    @classmethod
    def coordinate(cls, nvars: int, i: int) -> "DualPolynomial":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): ONE})

    @classmethod
    def constant(cls, nvars: int, c) -> "DualPolynomial":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "DualPolynomial") -> "DualPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return DualPolynomial(self.nvars, out)

    def __sub__(self, other: "DualPolynomial") -> "DualPolynomial":
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) - c
        return DualPolynomial(self.nvars, out)

    def __mul__(self, other):
        if isinstance(other, DualPolynomial):
            out: dict = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    out[e] = out.get(e, ZERO) + c1 * c2
            return DualPolynomial(self.nvars, out)
        return DualPolynomial(self.nvars, {e: c * Fraction(other) for e, c in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, DualPolynomial) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"DualPolynomial({self.nvars}, {self.terms!r})"

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def evaluate(self, ell: Vec) -> Fraction:
        total = ZERO
        for e, c in self.terms.items():
            v = c
            for xi, ei in zip(ell, e):
                for _ in range(ei):
                    v *= xi
            total += v
        return total

    def compose_linear(self, m: Mat) -> "DualPolynomial":
        """P(m . ell) as a polynomial in ell; m acts on coordinates."""
        coords = [
            DualPolynomial(self.nvars, {tuple(1 if k == j else 0 for k in range(self.nvars)): m[i][j] for j in range(self.nvars) if m[i][j] != 0})
            for i in range(self.nvars)
        ]
        out = DualPolynomial(self.nvars)
        for e, c in self.terms.items():
            term = DualPolynomial.constant(self.nvars, c)
            for i, ei in enumerate(e):
                for _ in range(ei):
                    term = term * coords[i]
            out = out + term
        return out

    # -- serialization -------------------------------------------------------

    def to_json_terms(self) -> list:
        return [[list(e), linalg.format_rational(c)] for e, c in sorted(self.terms.items())]

    @classmethod
    def from_json_terms(cls, nvars: int, terms: Iterable) -> "DualPolynomial":
        out: dict = {}
        for e, c in terms:
            e = tuple(int(x) for x in e)
            out[e] = out.get(e, ZERO) + linalg.parse_rational(c)
        return cls(nvars, out)


def load_polynomial_file(path) -> list[DualPolynomial]:
    """File format: {"vars": n, "polys": [[[exp-vector, "coeff"], ...], ...]}."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    n = data["vars"]
    return [DualPolynomial.from_json_terms(n, p) for p in data["polys"]]


def save_polynomial_file(path, nvars: int, polys: Iterable[DualPolynomial]):
    data = {"vars": nvars, "polys": [p.to_json_terms() for p in polys]}
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=1)
