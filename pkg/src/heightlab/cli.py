"""Batch command-line surface.

Reports are schema-versioned JSON (rationals serialized as "p/q" strings) or
CSV where the output is tabular.  Identical invocations produce byte-identical
reports: all sampling is seed-driven and nothing timestamps the output.

Exit codes: 1 parse/validation error, 2 precondition violation, 3 budget
exceeded.
"""

from __future__ import annotations

import csv
import functools
import io
import json
import math
import sys
from fractions import Fraction

import click

from . import counting, data, envelope, orbits, verify, zeta
from .algebra import AlgebraError, PreconditionError
from .geometry import ModelError, abc_invariants, anticanonical_class, twist_pole_set, validate_model
from .linalg import format_rational
from .polynomials import load_polynomial_file
from .zeta import ZetaError

SCHEMA_PREFIX = "heightlab"


def _emit(report, out, fmt):
    if fmt == "json":
        text = json.dumps(report, indent=1, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(report["columns"])
        writer.writerows(report["rows"])
        text = buf.getvalue()
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _cli_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except counting.BudgetExceeded as exc:
            click.echo(f"budget exceeded: {exc}", err=True)
            sys.exit(3)
        except (PreconditionError, verify.CheckFailure) as exc:
            click.echo(f"precondition violated: {exc}", err=True)
            sys.exit(2)
        except (AlgebraError, ModelError, ZetaError, FileNotFoundError,
                json.JSONDecodeError, KeyError, ValueError) as exc:
            click.echo(f"invalid input: {exc}", err=True)
            sys.exit(1)

    return wrapper


def _parse_ell(text: str, dim: int):
    parts = [Fraction(p) for p in text.split(",")]
    if len(parts) != dim:
        raise PreconditionError(f"--ell needs {dim} comma-separated rationals")
    return tuple(parts)


def _parse_s(model, text: str):
    parts = [Fraction(p) for p in text.split(",")]
    if len(parts) == 1 and model.rank == 1:
        return {model.boundary[0]: parts[0]}
    if len(parts) != model.rank:
        raise PreconditionError(
            f"--s needs {model.rank} comma-separated values for model {model.name}"
        )
    return dict(zip(model.boundary, parts))


def _s_strings(s):
    return {a: format_rational(v) for a, v in sorted(s.items())}


@click.group()
def main():
    """Exact coadjoint-orbit analysis and height-zeta experiments."""


# -- algebra -----------------------------------------------------------------


@main.group()
def algebra():
    """Nilpotent Lie algebra structure queries."""


@algebra.command("info")
@click.argument("algebra_name")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def algebra_info(algebra_name, out, fmt):
    alg = data.load_algebra(algebra_name)
    from .algebra import ascending_central_series, center

    series = ascending_central_series(alg)
    report = {
        "schema": f"{SCHEMA_PREFIX}/algebra-info/1",
        "algebra": alg.describe(),
        "nilpotency_class": alg.nilpotency_class(),
        "center_dim": center(alg).dim,
        "series_dims": [s.dim for s in series],
        "abelian": alg.is_abelian(),
    }
    if not alg.is_abelian():
        from .groups import universal_scalar

        report["universal_scalar"] = universal_scalar(alg)
    _emit(report, out, fmt)


# -- orbit -------------------------------------------------------------------


@main.group()
def orbit():
    """Coadjoint-orbit analysis."""


@orbit.command("analyze")
@click.argument("algebra_name")
@click.option("--ell", required=True, help="comma-separated rational coordinates of ell")
@click.option("--invariants", "inv_name", default=None, help="invariant-polynomial file or shipped name")
@click.option("--p", "prime", type=int, default=None, help="also report the p-adic multiplicity bound")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def orbit_analyze(algebra_name, ell, inv_name, prime, seed, out, fmt):
    alg = data.load_algebra(algebra_name)
    l = _parse_ell(ell, alg.dim)
    basis = orbits.standard_strong_basis(alg)
    stratum = orbits.d_vector(alg, l, basis)
    rep = orbits.orbit_representative(alg, l, basis)
    report = {
        "schema": f"{SCHEMA_PREFIX}/orbit-analyze/1",
        "algebra": algebra_name,
        "ell": [format_rational(v) for v in l],
        "d": list(stratum.d),
        "I": list(stratum.I),
        "J": list(stratum.J),
        "orbit_dim": orbits.orbit_dim(alg, l),
        "radical_dim": orbits.radical(alg, l).dim,
        "pfaffian": format_rational(orbits.pfaffian(alg, l, stratum, basis)),
        "representative": [format_rational(v) for v in rep],
    }
    if inv_name is None:
        inv_name = data.INVARIANT_SETS.get(algebra_name)
    if inv_name:
        invs = data.load_invariants(inv_name)
        norm = orbits.orbit_norm(alg, l, invs, seed=seed, invariant_set=inv_name)
        report["invariants"] = inv_name
        report["orbit_norm"] = format_rational(norm.value)
    if prime is not None:
        report["multiplicity_bound"] = {
            "p": prime,
            "value": format_rational(orbits.multiplicity_bound(alg, l, prime, basis)),
        }
    _emit(report, out, fmt)


@main.command("polarize")
@click.argument("algebra_name")
@click.option("--ell", required=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def polarize(algebra_name, ell, out, fmt):
    alg = data.load_algebra(algebra_name)
    l = _parse_ell(ell, alg.dim)
    basis = orbits.standard_strong_basis(alg)
    pol = orbits.vergne_polarization(alg, l, basis)
    report = {
        "schema": f"{SCHEMA_PREFIX}/polarize/1",
        "algebra": algebra_name,
        "ell": [format_rational(v) for v in l],
        "dimension": pol.dim,
        "is_ideal": pol.is_ideal,
        "generators": [[format_rational(v) for v in row] for row in pol.generators],
    }
    _emit(report, out, fmt)


# -- envelope ----------------------------------------------------------------


@main.group()
def envelope_cmd():
    """Universal enveloping algebra operations."""


main.add_command(envelope_cmd, name="envelope")


@envelope_cmd.command("sym")
@click.argument("poly_file")
@click.option("--algebra", "algebra_name", required=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def envelope_sym(poly_file, algebra_name, out, fmt):
    alg = data.load_algebra(algebra_name)
    polys = load_polynomial_file(data.resolve(poly_file))
    images = []
    for p in polys:
        img = envelope.symmetrize(alg, p)
        images.append({"".join(map(str, e)) if alg.dim < 10 else str(e): format_rational(c)
                       for e, c in sorted(img.terms.items())})
    report = {
        "schema": f"{SCHEMA_PREFIX}/envelope-sym/1",
        "algebra": algebra_name,
        "pbw_order": list(alg.labels),
        "images": images,
    }
    _emit(report, out, fmt)


@envelope_cmd.command("central")
@click.argument("poly_file")
@click.option("--algebra", "algebra_name", required=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def envelope_central(poly_file, algebra_name, out, fmt):
    alg = data.load_algebra(algebra_name)
    polys = load_polynomial_file(data.resolve(poly_file))
    results = [envelope.is_central(envelope.symmetrize(alg, p)) for p in polys]
    report = {
        "schema": f"{SCHEMA_PREFIX}/envelope-central/1",
        "algebra": algebra_name,
        "central": results,
        "all_central": all(results),
    }
    _emit(report, out, fmt)


# -- zeta --------------------------------------------------------------------


@main.group(name="zeta")
def zeta_cmd():
    """Local and global height zeta evaluation."""


@zeta_cmd.command("local")
@click.argument("model_name")
@click.option("--p", "prime", type=int, required=True)
@click.option("--s", "s_text", required=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def zeta_local(model_name, prime, s_text, out, fmt):
    m = data.load_model(model_name)
    s = _parse_s(m, s_text)
    value = zeta.local_height_integral(m, prime, s)
    report = {
        "schema": f"{SCHEMA_PREFIX}/zeta-local/1",
        "model": m.name,
        "p": prime,
        "s": _s_strings(s),
        "value": format_rational(value.value),
    }
    _emit(report, out, fmt)


@zeta_cmd.command("twist")
@click.argument("model_name")
@click.option("--f", "f_name", required=True, help="rational-function divisor datum (shipped name or file)")
@click.option("--p", "prime", type=int, required=True)
@click.option("--s", "s_text", required=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def zeta_twist(model_name, f_name, prime, s_text, out, fmt):
    m = data.load_model(model_name)
    f = data.load_f_divisor(f_name)
    if f.model != m.name:
        raise PreconditionError(f"divisor datum {f.name!r} belongs to model {f.model!r}")
    s = _parse_s(m, s_text)
    value = zeta.twisted_local_factor(m, f, prime, s)
    a0, degenerate = twist_pole_set(m, f)
    report = {
        "schema": f"{SCHEMA_PREFIX}/zeta-twist/1",
        "model": m.name,
        "f": f.name,
        "p": prime,
        "s": _s_strings(s),
        "value": format_rational(value.value),
        "pole_set": list(a0),
        "degenerate": degenerate,
    }
    _emit(report, out, fmt)


@zeta_cmd.command("predict")
@click.argument("model_name")
@click.option("--prime-bound", default=10000, show_default=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def zeta_predict(model_name, prime_bound, out, fmt):
    m = data.load_model(model_name)
    est = zeta.euler_leading_constant(m, prime_bound)
    report = {
        "schema": f"{SCHEMA_PREFIX}/zeta-predict/1",
        "model": m.name,
        "s": _s_strings(zeta.anticanonical_s(m)),
        "P": est.truncation_prime,
        "tau": est.tau,
        "pole_order": est.pole_order,
        "arch_density": est.arch_density,
        "factors_sample": {str(p): v for p, v in sorted(est.factors_sample.items())},
        "tail_heuristic": est.tail_heuristic,
    }
    _emit(report, out, fmt)


# -- count -------------------------------------------------------------------


@main.group(name="count")
def count_cmd():
    """Rational-point counts and asymptotic fits."""


@count_cmd.command("run")
@click.argument("model_name")
@click.option("--max-b", "--max-B", "max_b", type=float, required=True)
@click.option("--shells", default=8, show_default=True)
@click.option("--threads", default=None, type=int)
@click.option("--prime-bound", default=10000, show_default=True)
@click.option("--budget", default=counting.DEFAULT_TUPLE_BUDGET, type=float)
@click.option("--checkpoint", default=None, help="resumable checkpoint file")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@_cli_errors
def count_run(model_name, max_b, shells, threads, prime_bound, budget, checkpoint, out, fmt):
    m = data.load_model(model_name)
    est = zeta.euler_leading_constant(m, prime_bound)
    b = m.rank
    store = counting.CheckpointStore(checkpoint) if checkpoint else None
    rows = []
    for bound in counting.log_spaced_bounds(int(max_b), shells):
        if store is not None:
            n = counting.enumerate_points_partitioned(
                m, bound, partitions=max(threads or 8, 1), checkpoint=store,
                budget=int(budget), threads=threads)
        else:
            n = counting.enumerate_points(m, bound, budget=int(budget), threads=threads)
        pred = est.tau / math.factorial(b - 1) * bound * math.log(bound) ** (b - 1)
        rows.append((bound, n, f"{n / pred:.9f}" if pred > 0 else "nan"))
    report = {
        "schema": f"{SCHEMA_PREFIX}/count-run/1",
        "model": m.name,
        "tau": est.tau,
        "pole_order": b,
        "columns": ["B", "N", "N_over_prediction"],
        "rows": rows,
    }
    _emit(report, out, fmt)


@count_cmd.command("fit")
@click.argument("model_name")
@click.option("--max-b", "--max-B", "max_b", type=float, required=True)
@click.option("--shells", default=10, show_default=True)
@click.option("--threads", default=None, type=int)
@click.option("--prime-bound", default=10000, show_default=True)
@click.option("--budget", default=counting.DEFAULT_TUPLE_BUDGET, type=float)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def count_fit(model_name, max_b, shells, threads, prime_bound, budget, out, fmt):
    m = data.load_model(model_name)
    est = zeta.euler_leading_constant(m, prime_bound)
    b = m.rank
    samples = []
    for bound in counting.log_spaced_bounds(int(max_b), shells):
        samples.append((bound, counting.enumerate_points(m, bound, budget=int(budget), threads=threads)))
    rep = counting.fit_and_compare(samples, b, est.tau, model=m.name)
    report = {
        "schema": f"{SCHEMA_PREFIX}/count-fit/1",
        "model": m.name,
        "samples": [[bb, nn] for bb, nn in rep.samples],
        "pole_order": b,
        "tau": est.tau,
        "fitted_coefficient": rep.fitted_coefficient,
        "predicted_coefficient": rep.predicted_coefficient,
        "deviation": rep.deviation,
        "fit_coefficients": rep.coefficients,
    }
    _emit(report, out, fmt)


# -- verify ------------------------------------------------------------------


@main.command("verify")
@click.argument("suite")
@click.option("--seed", default=0, show_default=True)
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def verify_cmd(suite, seed, out, fmt):
    try:
        results = verify.run_suite(suite, seed=seed)
    except KeyError as exc:
        click.echo(f"invalid input: {exc}", err=True)
        sys.exit(1)
    report = {
        "schema": f"{SCHEMA_PREFIX}/verify/1",
        "suite": suite,
        "seed": seed,
        "checks": results,
        "ok": all(r["ok"] for r in results),
    }
    _emit(report, out, fmt)


# -- model sanity (used by tests and docs) ------------------------------------


@main.command("model-info")
@click.argument("model_name")
@click.option("--out", default=None)
@click.option("--format", "fmt", type=click.Choice(["json"]), default="json")
@_cli_errors
def model_info(model_name, out, fmt):
    m = data.load_model(model_name)
    a, b, c_set, c = abc_invariants(m, anticanonical_class(m))
    report = {
        "schema": f"{SCHEMA_PREFIX}/model-info/1",
        "model": m.name,
        "dim": m.dim,
        "boundary": list(m.boundary),
        "kappa": {k: v for k, v in sorted(m.kappa.items())},
        "validation": validate_model(m),
        "anticanonical_abc": {"a": format_rational(a), "b": b, "C": list(c_set), "c": format_rational(c)},
        "bad_primes": sorted(m.bad_primes),
    }
    _emit(report, out, fmt)


if __name__ == "__main__":
    main()
