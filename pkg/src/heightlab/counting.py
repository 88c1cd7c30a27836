"""Exact enumeration of rational points of bounded anticanonical height, and
asymptotic fits against the predicted leading constant.

Points of G(Q) are primitive integer tuples (w : x_1 : ... : x_n) with w > 0.
Enumeration sweeps primitive tuples with gcd filtering inside the exact
height-implied coordinate box; kernels are numba-jitted with a pure-numpy
fallback selected by the HEIGHTLAB_BACKEND environment variable.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import PreconditionError
from .geometry import CompactificationModel

DEFAULT_TUPLE_BUDGET = 20_000_000_000


class BudgetExceeded(RuntimeError):
    """The request implies more tuple visits than the configured budget."""


def _load_backend(name: str | None = None):
    name = name or os.environ.get("HEIGHTLAB_BACKEND", "")
    if name not in ("", "numba", "numpy"):
        raise PreconditionError(f"unknown backend {name!r}; use 'numba' or 'numpy'")
    if name in ("", "numba"):
        try:
            from . import _kernels_numba as k

            return k, "numba"
        except ImportError:
            if name == "numba":
                raise
    from . import _kernels_numpy as k

    return k, "numpy"


def backend_name() -> str:
    return _load_backend()[1]


def set_threads(n: int):
    try:
        import numba

        numba.set_num_threads(min(max(1, n), numba.config.NUMBA_NUM_THREADS))
    except ImportError:
        pass  # numpy backend is single-threaded


# ---------------------------------------------------------------------------
# heights


def normalize_point(coords) -> tuple[int, ...]:
    """Canonical primitive representative with positive first coordinate."""
    c = [int(v) for v in coords]
    if c[0] == 0:
        raise PreconditionError("w = 0 is a boundary point, not a point of G")
    g = 0
    for v in c:
        g = math.gcd(g, v)
    c = [v // g for v in c]
    if c[0] < 0:
        c = [-v for v in c]
    return tuple(c)


def height(m: CompactificationModel, pt) -> int:
    """Exact anticanonical height of a primitive tuple (w : x_1 : ... : x_n)."""
    pt = tuple(int(v) for v in pt)
    if len(pt) != m.dim + 1:
        raise PreconditionError(f"point needs {m.dim + 1} coordinates for {m.name}")
    if pt[0] <= 0:
        raise PreconditionError("point must have positive first coordinate (w > 0)")
    g = 0
    for v in pt:
        g = math.gcd(g, v)
    if g != 1:
        raise PreconditionError("point coordinates must be coprime")
    if m.height_kind == "projective":
        return max(abs(v) for v in pt) ** (m.dim + 1)
    if m.height_kind == "blowup_p2":
        w, x, y = pt
        big = max(abs(w), abs(x), abs(y))
        m2 = max(abs(w), abs(x))
        return big * big * m2 // math.gcd(w, x)
    raise PreconditionError(f"no height evaluator for kind {m.height_kind!r}")


def box_side(m: CompactificationModel, bound: int) -> int:
    """Largest possible |coordinate| of a point with height <= bound."""
    if m.height_kind == "projective":
        t = round(bound ** (1.0 / (m.dim + 1)))
        while t ** (m.dim + 1) > bound:
            t -= 1
        while (t + 1) ** (m.dim + 1) <= bound:
            t += 1
        return t
    if m.height_kind == "blowup_p2":
        return math.isqrt(bound)
    raise PreconditionError(f"no box for kind {m.height_kind!r}")


def work_estimate(m: CompactificationModel, bound: int) -> int:
    t = box_side(m, bound)
    if m.height_kind == "projective":
        return t * (2 * t + 1) ** m.dim
    return t * (2 * t + 1) + 250 * bound  # scan plus bounded y-sweeps


# ---------------------------------------------------------------------------
# enumeration


def enumerate_points(m: CompactificationModel, bound: int, *, backend: str | None = None,
                     budget: int = DEFAULT_TUPLE_BUDGET, threads: int | None = None,
                     w_range: tuple[int, int] | None = None) -> int:
    """Exact N(bound), optionally restricted to a first-coordinate range."""
    if bound < 0:
        raise PreconditionError("height bound must be nonnegative")
    if bound < 1:
        return 0
    if work_estimate(m, bound) > budget:
        raise BudgetExceeded(
            f"enumeration at B={bound} implies ~{work_estimate(m, bound):.2e} tuples "
            f"(budget {budget:.2e})"
        )
    kernels, _ = _load_backend(backend)
    if threads is not None:
        set_threads(threads)
    t = box_side(m, bound)
    w_lo, w_hi = w_range if w_range is not None else (1, t)
    w_hi = min(w_hi, t)
    if w_lo > w_hi:
        return 0
    if m.height_kind == "projective":
        fn = {1: kernels.count_p1_range, 2: kernels.count_p2_range, 3: kernels.count_p3_range}.get(m.dim)
        if fn is None:
            raise PreconditionError(f"no enumeration kernel for projective dim {m.dim}")
        return int(fn(t, w_lo, w_hi))
    if m.height_kind == "blowup_p2":
        return int(kernels.count_blowup_range(bound, w_lo, w_hi))
    raise PreconditionError(f"no enumeration kernel for kind {m.height_kind!r}")


class CheckpointStore:
    """Resumable per-partition counts keyed by (model, B, partition)."""

    def __init__(self, path):
        self.path = Path(path)
        self.entries: dict[str, int] = {}
        if self.path.exists():
            with open(self.path, "r", encoding="utf-8") as fh:
                self.entries = {k: int(v) for k, v in json.load(fh).items()}

    @staticmethod
    def key(model: str, bound: int, partition: int) -> str:
        return f"{model}:{bound}:{partition}"

    def save(self):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "w", encoding="utf-8") as fh:
            json.dump(self.entries, fh, sort_keys=True, indent=0)


def enumerate_points_partitioned(m: CompactificationModel, bound: int, *, partitions: int = 8,
                                 checkpoint: CheckpointStore | None = None,
                                 backend: str | None = None,
                                 budget: int = DEFAULT_TUPLE_BUDGET,
                                 threads: int | None = None) -> int:
    """N(bound) as a sum of independent w-range partition counts.

    Completed partitions found in the checkpoint store are not recomputed, so
    an interrupted run resumes where it stopped.
    """
    if bound < 1:
        return 0
    t = box_side(m, bound)
    edges = np.linspace(1, t + 1, partitions + 1, dtype=np.int64)
    total = 0
    for i in range(partitions):
        lo, hi = int(edges[i]), int(edges[i + 1]) - 1
        if lo > hi:
            continue
        key = CheckpointStore.key(m.name, bound, i)
        if checkpoint is not None and key in checkpoint.entries:
            total += checkpoint.entries[key]
            continue
        c = enumerate_points(m, bound, backend=backend, budget=budget, threads=threads,
                             w_range=(lo, hi))
        if checkpoint is not None:
            checkpoint.entries[key] = c
            checkpoint.save()
        total += c
    return total


# ---------------------------------------------------------------------------
# fits


@dataclass
class CountReport:
    model: str
    samples: list[tuple[int, int]]
    fitted_coefficient: float
    predicted_coefficient: float
    deviation: float
    pole_order: int
    coefficients: list[float] = field(default_factory=list)

    def rows(self):
        """CSV rows: B, N, N over the full fitted prediction."""
        out = []
        for bound, n in self.samples:
            li = math.log(bound)
            pred = bound * sum(c * li**j for j, c in enumerate(self.coefficients))
            out.append((bound, n, n / pred if pred else float("nan")))
        return out


def fit_and_compare(samples, b: int, tau: float, model: str = "") -> CountReport:
    """Least-squares fit of N(B)/B against sum_{j<b} c_j log(B)^j.

    The leading c_{b-1} is compared with tau/(b-1)!.  For b = 1 the fit
    degenerates to the mean of N/B over the top decade of samples.
    """
    samples = sorted((int(bb), nn) for bb, nn in samples)
    if len(samples) < 3:
        raise PreconditionError("need at least 3 samples")
    span = samples[-1][0] / samples[0][0]
    if span < 100:
        raise PreconditionError("samples must span at least 2 decades")
    if len(samples) < b:
        raise PreconditionError("fewer samples than fit coefficients")
    if b == 1:
        top = [n / bb for bb, n in samples if bb >= samples[-1][0] / 10]
        coeffs = [sum(top) / len(top)]
    else:
        logs = np.array([math.log(bb) for bb, _ in samples])
        ratio = np.array([n / bb for bb, n in samples])
        design = np.vander(logs, b, increasing=True)
        sol, *_ = np.linalg.lstsq(design, ratio, rcond=None)
        coeffs = [float(c) for c in sol]
    c_hat = coeffs[b - 1]
    predicted = tau / math.factorial(b - 1)
    deviation = abs(c_hat / predicted - 1.0) if predicted else float("inf")
    return CountReport(
        model=model,
        samples=samples,
        fitted_coefficient=c_hat,
        predicted_coefficient=predicted,
        deviation=deviation,
        pole_order=b,
        coefficients=coeffs,
    )


def log_spaced_bounds(b_max: int, shells: int, decades: float = 3.0) -> list[int]:
    """Deterministic sample bounds: `shells` points log-spaced over `decades`."""
    if shells < 3:
        raise PreconditionError("need at least 3 shells")
    lo = b_max / 10.0**decades
    out = sorted({max(1, round(lo * (b_max / lo) ** (i / (shells - 1)))) for i in range(shells)})
    return out


def count_translated_p1(bound: int, c: int) -> int:
    """#{points pt of the p1 model with H(translate_c(pt)) <= bound}, where
    translate_c maps (w : a) to (w : a + c w).  Enumerated directly with a
    padded box and the exact filter."""
    t = math.isqrt(bound)
    total = 0
    for w in range(1, t + 1):
        lo, hi = -t - c * w, t - c * w
        a = np.arange(min(lo, hi), max(lo, hi) + 1, dtype=np.int64)
        shifted = a + c * w
        ok = (np.abs(shifted) <= t) & (np.gcd(np.int64(w), np.abs(a)) == 1)
        total += int(np.count_nonzero(ok))
    return total


# ---------------------------------------------------------------------------
# Heisenberg embedding (the P3 model as a compactification of the Heisenberg
# group; the height evaluator never sees the group structure)


def heisenberg_embed(x: Fraction, y: Fraction, z: Fraction) -> tuple[int, ...]:
    """Projective coordinates of the Heisenberg group point with exponential
    coordinates (x, y, z): (1 : x : y : z + xy/2), cleared to a primitive tuple."""
    x, y, z = Fraction(x), Fraction(y), Fraction(z)
    last = z + x * y / 2
    den = math.lcm(x.denominator, y.denominator, last.denominator)
    return normalize_point((den, x * den, y * den, last * den))


def heisenberg_coords(pt) -> tuple[Fraction, Fraction, Fraction]:
    """Inverse of heisenberg_embed on primitive tuples (w : a : b : c)."""
    w, a, b, c = (int(v) for v in pt)
    x = Fraction(a, w)
    y = Fraction(b, w)
    z = Fraction(c, w) - x * y / 2
    return x, y, z
