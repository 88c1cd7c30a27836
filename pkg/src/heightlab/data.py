"""Access to the shipped data files.

The directory is overridable through the HEIGHTLAB_DATA environment variable;
names passed to the loaders may also be plain paths to user files.
"""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .algebra import NilpotentLieAlgebra
from .geometry import CompactificationModel, RationalFunctionDivisor
from .groups import MatrixRep
from .polynomials import load_polynomial_file


def data_dir() -> Path:
    env = os.environ.get("HEIGHTLAB_DATA")
    if env:
        return Path(env)
    return Path(resources.files("heightlab") / "data")


def resolve(name: str) -> Path:
    p = Path(name)
    if p.exists() and p.is_file():
        return p
    stem = name if not name.endswith(".json") else name[: -len(".json")]
    candidate = data_dir() / f"{stem}.json"
    if candidate.exists():
        return candidate
    raise FileNotFoundError(f"no shipped data or file named {name!r}")


def load_algebra(name: str) -> NilpotentLieAlgebra:
    return NilpotentLieAlgebra.from_file(resolve(name))


def load_model(name: str) -> CompactificationModel:
    return CompactificationModel.from_file(resolve(name))


def load_rep(name: str, algebra: NilpotentLieAlgebra | None = None) -> MatrixRep:
    if algebra is None:
        base = name.removesuffix("_rep")
        algebra = load_algebra(base)
    return MatrixRep.from_file(algebra, resolve(name))


def load_invariants(name: str):
    return load_polynomial_file(resolve(name))


def load_f_divisor(name: str) -> RationalFunctionDivisor:
    return RationalFunctionDivisor.from_file(resolve(name))


SHIPPED_ALGEBRAS = ("g1", "g2", "g3", "g4", "h3", "n3", "k4")
SHIPPED_MODELS = ("p1", "p2", "p3", "blowup_p2")
SHIPPED_F_DATA = ("p1_f_x", "p2_f_x", "blowup_f_x", "blowup_f_y")
INVARIANT_SETS = {"h3": "h3_invariants", "n3": "h3_invariants", "k4": "k4_invariants"}
MATRIX_REPS = {"h3": "h3_rep", "n3": "n3_rep", "k4": "k4_rep"}
