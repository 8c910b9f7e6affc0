"""``cdna``: command-line front end for every computation in the library.

All commands emit machine-readable tables (CSV by default, JSON with
``--format json``) whose rows carry the full parameter set needed to reproduce
them, including the seed for simulations.  Reals are printed with 12
significant digits.

Exit codes: 0 success, 2 usage error, 3 unsupported range (feasibility cap),
4 truncated trials under ``sim --strict``.
"""
from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from typing import Optional

import click

from .binary import binary4_alpha, construct_binary4, optimize_binary4_grid
from .codes import (
    CompositeCode,
    construct_base_plus_uniform,
    construct_distinct_support,
    construct_grid_code,
    custom_decoder_from_table,
    evaluate_code,
    mld_decoder,
    self_decoding_probability,
)
from .coverage import (
    CoverageParams,
    coverage_bounds,
    expected_coverage,
    expected_coverage_partial,
    random_access_expectation,
)
from .model import CompositeSymbol, UnsupportedRangeError, enumerate_observed
from .simulate import SimConfig, run_simulation

EXIT_UNSUPPORTED_RANGE = 3
EXIT_STRICT_TRUNCATION = 4

_DEFAULT_MAX_ENUM = 2_000_000


def _max_enum() -> int:
    raw = os.environ.get("CDNA_MAX_ENUM")
    if raw is None:
        return _DEFAULT_MAX_ENUM
    try:
        value = int(raw)
    except ValueError:
        raise click.UsageError(f"CDNA_MAX_ENUM must be an integer, got {raw!r}")
    if value < 1:
        raise click.UsageError(f"CDNA_MAX_ENUM must be >= 1, got {value}")
    return value


def _fmt_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def _json_value(value):
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, float):
        return float(f"{value:.12g}")
    return value


def _emit(rows: list[dict], fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps([{k: _json_value(v) for k, v in row.items()} for row in rows], indent=2))
        return
    header = list(rows[0].keys())
    for row in rows:
        if list(row.keys()) != header:
            raise AssertionError("inconsistent row schema")
    click.echo(",".join(header))
    for row in rows:
        click.echo(",".join(_fmt_value(v) for v in row.values()))


format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["csv", "json"]),
    default="csv",
    show_default=True,
    help="Output format.",
)


def _render_symbol(symbol: CompositeSymbol) -> str:
    if symbol.q == 2:
        return _fmt_value(symbol.probs[0])
    return ":".join(_fmt_value(p) for p in symbol.probs)


def _render_code(code: CompositeCode) -> str:
    return "|".join(_render_symbol(s) for s in code.symbols)


def _parse_range(spec: str) -> list[int]:
    parts = spec.split(":")
    if len(parts) != 3:
        raise click.UsageError(f"--range must look like START:END:STEP, got {spec!r}")
    try:
        start, end = int(parts[0]), int(parts[1])
    except ValueError:
        raise click.UsageError(f"non-integer bound in --range {spec!r}")
    step = parts[2]
    values = []
    if step.startswith("*"):
        try:
            factor = int(step[1:])
        except ValueError:
            raise click.UsageError(f"bad multiplicative step in --range {spec!r}")
        if factor < 2:
            raise click.UsageError("multiplicative step must be >= 2")
        v = start
        while v <= end:
            values.append(v)
            v *= factor
    else:
        try:
            stride = int(step)
        except ValueError:
            raise click.UsageError(f"bad step in --range {spec!r}")
        if stride < 1:
            raise click.UsageError("step must be >= 1")
        values = list(range(start, end + 1, stride))
    if not values:
        raise click.UsageError(f"--range {spec!r} selects no values")
    return values


def _parse_family_params(body: str, spec: str, offset: int) -> dict:
    params = {}
    pos = offset
    for chunk in body.split(","):
        if "=" not in chunk:
            raise click.UsageError(
                f"code spec error at position {spec.index(chunk, pos)}: expected key=value, got {chunk!r}"
            )
        key, value = chunk.split("=", 1)
        params[key.strip()] = value.strip()
        pos = spec.index(chunk, pos) + len(chunk)
    return params


def _parse_parts(raw: str) -> list[tuple[int, ...]]:
    parts = []
    for group in raw.split("|"):
        try:
            parts.append(tuple(int(tok) for tok in group.split("+")))
        except ValueError:
            raise click.UsageError(f"bad partition group {group!r}; use e.g. parts=1+2|3+4")
    return parts


def parse_code_spec(spec: str, max_enum: Optional[int] = None) -> CompositeCode:
    """Parse a code specification string.

    Grammar:
      * binary shorthand: comma-separated values, e.g. ``0.4,0.5,0.6``;
      * general alphabet: ``q=Q; p11 p12 ... | p21 p22 ...``;
      * families: ``qplus1:q=2``, ``omega:n=2,q=2``, ``binary4:n=3``,
        ``distinct:q=4,parts=1+2|3+4``.
    """
    if max_enum is None:
        max_enum = _max_enum()
    s = spec.strip()
    if not s:
        raise click.UsageError("code spec error at position 0: empty spec")
    if s.startswith("q="):
        head, sep, body = s.partition(";")
        try:
            q = int(head[2:])
        except ValueError:
            raise click.UsageError(f"code spec error at position 2: bad alphabet size in {head!r}")
        if not sep:
            raise click.UsageError(f"code spec error at position {len(head)}: expected ';' after q=Q")
        rows = []
        pos = len(head) + 1
        for row in body.split("|"):
            tokens = row.split()
            try:
                probs = [float(tok) for tok in tokens]
            except ValueError:
                raise click.UsageError(f"code spec error at position {spec.index(row, pos)}: bad probability in {row!r}")
            if len(probs) != q:
                raise click.UsageError(
                    f"code spec error at position {spec.index(row, pos)}: row has {len(probs)} entries, expected q={q}"
                )
            rows.append(probs)
            pos = spec.index(row, pos) + len(row)
        try:
            return CompositeCode(rows)
        except ValueError as exc:
            raise click.UsageError(f"invalid code: {exc}")
    head, sep, body = s.partition(":")
    if sep and head in ("qplus1", "omega", "binary4", "distinct"):
        params = _parse_family_params(body, spec, len(head) + 1)
        try:
            if head == "qplus1":
                return construct_base_plus_uniform(int(params["q"]))
            if head == "omega":
                return construct_grid_code(int(params["n"]), int(params["q"]), max_enum=max_enum)
            if head == "binary4":
                return construct_binary4(int(params["n"]))
            return construct_distinct_support(
                int(params["q"]),
                len(_parse_parts(params["parts"])),
                _parse_parts(params["parts"]),
            )
        except KeyError as exc:
            raise click.UsageError(f"family {head!r} is missing parameter {exc.args[0]!r}")
        except ValueError as exc:
            raise click.UsageError(f"invalid family parameters: {exc}")
    # binary shorthand
    values = []
    pos = 0
    for token in s.split(","):
        try:
            values.append(float(token))
        except ValueError:
            raise click.UsageError(
                f"code spec error at position {spec.index(token, pos) if token else pos}: "
                f"bad value {token!r}"
            )
        pos = spec.index(token, pos) + len(token)
    try:
        return CompositeCode.binary(values)
    except ValueError as exc:
        raise click.UsageError(f"invalid code: {exc}")


def _unsupported(exc: UnsupportedRangeError) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_UNSUPPORTED_RANGE)


@click.group()
def main() -> None:
    """Coverage-depth and composite-code calculator."""


@main.command()
@click.option("--ell", type=int, help="Sequence length (exclusive with --range).")
@click.option("--range", "ell_range", metavar="START:END:STEP", help="Sweep of lengths; STEP like 2 or *2.")
@click.option("--omega", type=int, required=True, help="Support size per index.")
@click.option("--bounds", is_flag=True, help="Include analytic lower/upper bounds (omega >= 2).")
@click.option("--tol", type=float, default=1e-12, show_default=True, help="Series truncation tolerance.")
@format_option
def coverage(ell, ell_range, omega, bounds, tol, fmt) -> None:
    """Expected reads to recover a full sequence."""
    if (ell is None) == (ell_range is None):
        raise click.UsageError("provide exactly one of --ell or --range")
    ells = [ell] if ell is not None else _parse_range(ell_range)
    rows = []
    try:
        for l in ells:
            row = {
                "kind": "coverage",
                "provenance": "formula",
                "ell": l,
                "omega": omega,
                "tol": tol,
                "expected": expected_coverage(l, omega, tol),
            }
            if bounds:
                pair = coverage_bounds(l, omega)
                row["lower"] = pair.lower
                row["upper"] = pair.upper
            rows.append(row)
    except UnsupportedRangeError as exc:
        _unsupported(exc)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(rows, fmt)


@main.command()
@click.option("--ell", type=int, required=True)
@click.option("--omega", type=int, required=True)
@click.option("--r", "r", type=int, required=True, help="Recovery threshold (indices needed).")
@click.option("--tol", type=float, default=1e-12, show_default=True)
@format_option
def partial(ell, omega, r, tol, fmt) -> None:
    """Expected reads to recover at least r of the ell indices."""
    try:
        value = expected_coverage_partial(ell, omega, r, tol)
        reference = expected_coverage(r, omega, tol)
    except UnsupportedRangeError as exc:
        _unsupported(exc)
        return
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(
        [
            {
                "kind": "partial",
                "provenance": "formula",
                "ell": ell,
                "omega": omega,
                "r": r,
                "tol": tol,
                "expected": value,
                "subset_bound": reference,
            }
        ],
        fmt,
    )


@main.command()
@click.option("--ell", type=int, required=True)
@click.option("--omega", type=int, required=True)
@click.option("--k", "k", type=int, required=True, help="Number of labeled sequences.")
@format_option
def ra(ell, omega, k, fmt) -> None:
    """Expected reads to recover one target sequence among k."""
    try:
        value = random_access_expectation(ell, omega, k)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    _emit(
        [
            {
                "kind": "ra",
                "provenance": "formula",
                "ell": ell,
                "omega": omega,
                "k": k,
                "expected": value,
            }
        ],
        fmt,
    )


@main.command()
@click.option("--mode", type=click.Choice(["recovery", "partial", "ra"]), default="recovery", show_default=True)
@click.option("--ell", type=int, required=True)
@click.option("--omega", type=int, required=True)
@click.option("--r", "r", type=int, default=None, help="Threshold for --mode partial.")
@click.option("--k", "k", type=int, default=None, help="Pool size for --mode ra.")
@click.option("--trials", type=int, required=True)
@click.option("--seed", type=int, required=True)
@click.option("--max-transmissions", type=int, default=10**6, show_default=True)
@click.option("--strict", is_flag=True, help="Exit 4 when any trial was truncated.")
@format_option
def sim(mode, ell, omega, r, k, trials, seed, max_transmissions, strict, fmt) -> None:
    """Monte Carlo estimate of a coverage expectation (deterministic per seed)."""
    if mode == "partial" and r is None:
        raise click.UsageError("--mode partial requires --r")
    if mode == "ra" and k is None:
        raise click.UsageError("--mode ra requires --k")
    if mode != "partial" and r is not None:
        raise click.UsageError("--r is only meaningful with --mode partial")
    if mode != "ra" and k is not None:
        raise click.UsageError("--k is only meaningful with --mode ra")
    try:
        config = SimConfig(
            params=CoverageParams(ell=ell, omega=omega, r=r, k=k),
            trials=trials,
            seed=seed,
            max_transmissions=max_transmissions,
            mode=mode,
        )
    except ValueError as exc:
        raise click.UsageError(str(exc))
    report = run_simulation(config)
    _emit(
        [
            {
                "kind": "sim",
                "provenance": "simulation",
                "mode": mode,
                "ell": ell,
                "omega": omega,
                "r": r,
                "k": k,
                "trials": trials,
                "seed": seed,
                "max_transmissions": max_transmissions,
                "mean": report.mean,
                "std_error": report.std_error,
                "ci_low": None if report.ci95 is None else report.ci95[0],
                "ci_high": None if report.ci95 is None else report.ci95[1],
                "truncated_trials": report.truncated_trials,
            }
        ],
        fmt,
    )
    if strict and report.truncated_trials > 0:
        click.echo(f"error: {report.truncated_trials} truncated trial(s) under --strict", err=True)
        sys.exit(EXIT_STRICT_TRUNCATION)


def _load_table_decoder(code: CompositeCode, n: int, path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read table decoder {path!r}: {exc}")
    overrides = {}
    for key, value in raw.items():
        try:
            counts = tuple(int(tok) for tok in key.split(","))
        except ValueError:
            raise click.UsageError(f"bad count-vector key {key!r} in {path!r}")
        if not isinstance(value, int):
            raise click.UsageError(f"table value for {key!r} must be a codeword index")
        overrides[counts] = value
    try:
        return custom_decoder_from_table(code, n, overrides)
    except ValueError as exc:
        raise click.UsageError(f"invalid table decoder: {exc}")


@main.command("code-eval")
@click.option("--code", "code_spec", required=True, help="Inline code spec or a file containing one.")
@click.option("--n", type=int, required=True, help="Reads per symbol.")
@click.option("--decoder", "decoder_spec", default="mld", show_default=True, help="mld or table:<file.json>.")
@format_option
def code_eval(code_spec, n, decoder_spec, fmt) -> None:
    """Per-symbol success probabilities, f_min, and f_avg of a code.

    Code specs: binary shorthand "0.4,0.5,0.6"; general "q=Q; p11 p12 ...|p21 ...";
    families "qplus1:q=2", "omega:n=2,q=2", "binary4:n=3", "distinct:q=4,parts=1+2|3+4".
    The spec may also be the path of a file holding one of those forms.
    """
    max_enum = _max_enum()
    if os.path.isfile(code_spec):
        with open(code_spec, "r", encoding="utf-8") as fh:
            code_spec = fh.read().strip()
    code = parse_code_spec(code_spec, max_enum=max_enum)
    if decoder_spec == "mld":
        decoder = mld_decoder(code)
    elif decoder_spec.startswith("table:"):
        decoder = _load_table_decoder(code, n, decoder_spec[len("table:"):])
    else:
        raise click.UsageError(f"unknown decoder {decoder_spec!r}; use mld or table:<file>")
    try:
        result = evaluate_code(code, n, decoder=decoder, max_enum=max_enum)
    except UnsupportedRangeError as exc:
        _unsupported(exc)
        return
    except ValueError as exc:
        raise click.UsageError(str(exc))
    rendered = _render_code(code)
    rows = []
    for i, symbol in enumerate(code.symbols):
        rows.append(
            {
                "kind": "symbol",
                "provenance": "formula",
                "n": n,
                "code": rendered,
                "decoder": decoder_spec,
                "symbol_index": i,
                "symbol": _render_symbol(symbol),
                "p_succ": result.per_symbol_success[symbol],
                "f_min": None,
                "f_avg": None,
            }
        )
    rows.append(
        {
            "kind": "summary",
            "provenance": "formula",
            "n": n,
            "code": rendered,
            "decoder": decoder_spec,
            "symbol_index": None,
            "symbol": None,
            "p_succ": None,
            "f_min": result.f_min,
            "f_avg": result.f_avg,
        }
    )
    _emit(rows, fmt)


@main.command()
@click.option("--family", type=click.Choice(["distinct", "qplus1", "omega", "binary4"]), required=True)
@click.option("--q", "q", type=int, default=None)
@click.option("--n", type=int, default=None)
@click.option("--parts", default=None, help="Partition for --family distinct, e.g. 1+2|3+4.")
@click.option("--verify-grid", "verify_grid", type=float, default=None, help="Grid step for the binary4 oracle check.")
@format_option
def design(family, q, n, parts, verify_grid, fmt) -> None:
    """Construct an optimal code family and report its figures of merit."""
    max_enum = _max_enum()
    if verify_grid is not None and family != "binary4":
        raise click.UsageError("--verify-grid applies to --family binary4 only")
    try:
        if family == "qplus1":
            if q is None:
                raise click.UsageError("--family qplus1 requires --q")
            code = construct_base_plus_uniform(q)
            f_min = None if n is None else 1 - Fraction(1, q ** (n - 1))
            f_avg = None if n is None else 1 - Fraction(1, q ** (n - 1) * (q + 1))
            alpha = None
        elif family == "omega":
            if q is None or n is None:
                raise click.UsageError("--family omega requires --q and --n")
            code = construct_grid_code(n, q, max_enum=max_enum)
            betas = [
                self_decoding_probability(theta)
                for theta in enumerate_observed(n, q, max_size=max_enum)
            ]
            f_min = min(betas)
            f_avg = sum(betas) / len(betas)
            alpha = None
        elif family == "distinct":
            if q is None or parts is None:
                raise click.UsageError("--family distinct requires --q and --parts")
            groups = _parse_parts(parts)
            code = construct_distinct_support(q, len(groups), groups)
            f_min = 1
            f_avg = 1
            alpha = None
        else:
            if n is None:
                raise click.UsageError("--family binary4 requires --n")
            code = construct_binary4(n)
            alpha = binary4_alpha(n)
            result = evaluate_code(code, n, max_enum=max_enum)
            f_min = result.f_min
            f_avg = result.f_avg
    except UnsupportedRangeError as exc:
        _unsupported(exc)
        return
    except ValueError as exc:
        raise click.UsageError(str(exc))
    base = {
        "kind": "design",
        "provenance": "formula",
        "family": family,
        "q": code.q,
        "n": n,
        "alpha": alpha,
        "code": _render_code(code),
        "f_min": f_min,
        "f_avg": f_avg,
        "grid_step": None,
        "x_star": None,
        "f_min_star": None,
        "alpha_delta": None,
    }
    rows = [base]
    if verify_grid is not None:
        x_star, f_star = optimize_binary4_grid(n, verify_grid, max_enum=max_enum)
        verify = dict(base)
        verify.update(
            {
                "kind": "design-verify",
                "provenance": "oracle",
                "grid_step": verify_grid,
                "x_star": x_star,
                "f_min_star": f_star,
                "alpha_delta": abs(x_star - alpha),
            }
        )
        rows.append(verify)
    _emit(rows, fmt)


if __name__ == "__main__":
    main()
