"""Batch front end: parse inputs, run detectors and diagnostics, emit tables.

Input is either a function-spec text file (funcspec grammar) or a series
JSON file (coefficients module).  Output is CSV or JSON with repr-formatted
floats and sorted rows, so identical inputs produce byte-identical files.

Exit codes: 0 success, 1 validation or parse error, 2 precision failure
(PrecisionWarning raised anywhere and --strict given).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import chebyshev as chebmod
from .coefficients import (
    ChebyshevSeries,
    FourierSeries,
    chebyshev_coefficients,
    fourier_coefficients,
    series_from_json,
    series_to_json,
)
from .funcspec import (
    PiecewiseFunction,
    eval_expr_array,
    evaluate,
    one_sided_limits,
    parse_function_spec,
    true_jump,
)
from .summability import cesaro_jump, fejer_jump
from .tails import (
    PrecisionWarning,
    TailSumConfig,
    jump_from_conjugate,
    jump_from_integrated,
    parseval_increment_check,
    s_n_diagnostic,
    v2_tail_diagnostic,
)
from .variation import SampleSequence, build_report, classify

__all__ = ["RunConfig", "run", "sample_for_variation", "main", "entry"]

_COMMANDS = ("coeffs", "detect", "table", "variation", "diagnose")
_METHODS = ("fejer", "cesaro", "integrated", "conjugate", "chebyshev")
_CHECKS = ("v2", "parseval", "sn", "sawtooth_bound")


class _ValidationError(ValueError):
    """Bad configuration or input; maps to exit status 1."""


@dataclass
class RunConfig:
    """Everything one invocation needs; the flag parser fills one of these."""

    command: str
    input: Optional[str] = None
    method: str = "fejer"
    basis: str = "auto"  # auto | fourier | chebyshev
    r: Optional[int] = None
    alpha: float = 1.0
    n0: int = 25
    nmax: int = 400
    points: Optional[list[float]] = None
    grid: Optional[int] = None
    K_cap: Optional[int] = None
    out: Optional[str] = None
    fmt: str = "csv"
    strict: bool = False
    check: str = "v2"
    n_list: Optional[list[int]] = None
    densities: Optional[list[int]] = None


# ---------------------------------------------------------------------------
# Input loading and series construction
# ---------------------------------------------------------------------------

def _load(config: RunConfig):
    """Returns (f, series) with f None for JSON input, series None for specs."""
    if config.input is None:
        raise _ValidationError("--input is required for this command")
    try:
        with open(config.input, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _ValidationError(f"cannot read {config.input}: {exc}") from exc
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return None, series_from_json(text)
    return parse_function_spec(text), None


def _n_schedule(config: RunConfig) -> list[int]:
    if config.n_list:
        ns = list(config.n_list)
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise _ValidationError("--n-list must be strictly increasing")
        if ns[0] < 1:
            raise _ValidationError("n values must be >= 1")
        return ns
    if config.n0 < 1:
        raise _ValidationError("--n0 must be >= 1")
    if config.nmax < config.n0:
        raise _ValidationError("--nmax must be >= --n0")
    ns = [config.n0]
    while ns[-1] * 2 <= config.nmax:
        ns.append(ns[-1] * 2)
    return ns


def _resolve_basis(config: RunConfig, series) -> str:
    basis = config.basis
    if basis == "auto":
        if isinstance(series, ChebyshevSeries) or config.method == "chebyshev":
            basis = "chebyshev"
        else:
            basis = "fourier"
    if config.method == "chebyshev" and basis != "chebyshev":
        raise _ValidationError("--method chebyshev requires --basis chebyshev")
    if config.method != "chebyshev" and basis == "chebyshev":
        raise _ValidationError(f"--method {config.method} requires Fourier coefficients")
    return basis


def _default_K(f: PiecewiseFunction, config: RunConfig, nmax: int) -> int:
    if config.K_cap is not None:
        return config.K_cap
    from .coefficients import _as_polynomial

    closed_ok = all(
        (p := _as_polynomial(e)) is not None and len(p) <= 4 for e in f.pieces
    )
    # closed forms are cheap; quadrature cost grows with K, so cap it harder
    return max(200_000, 4 * nmax) if closed_ok else max(4096, 4 * nmax)


def _series_for(config: RunConfig, f, series, basis: str, nmax: int):
    if series is not None:
        if basis == "chebyshev" and not isinstance(series, ChebyshevSeries):
            raise _ValidationError("input series is not a Chebyshev series")
        if basis == "fourier" and not isinstance(series, FourierSeries):
            raise _ValidationError("input series is not a Fourier series")
        return series
    K = _default_K(f, config, nmax)
    if basis == "chebyshev":
        return chebyshev_coefficients(f, K)
    return fourier_coefficients(f, K)


def _eval_points(config: RunConfig, f, series, basis: str) -> list[float]:
    if config.points:
        pts = sorted(set(config.points))
    elif config.grid:
        if config.grid < 2:
            raise _ValidationError("--grid must be >= 2")
        if f is not None:
            lo, hi = f.domain
        elif basis == "chebyshev":
            lo, hi = -1.0, 1.0
        else:
            lo, hi = 0.0, 2.0 * math.pi
        span = hi - lo
        margin = 1e-6 * span
        pts = np.linspace(lo + margin, hi - margin, config.grid).tolist()
    elif f is not None:
        pts = list(f.breakpoints)
        if f.periodic and basis == "fourier":
            pts = [f.domain[0]] + pts
        if not pts:
            raise _ValidationError(
                "no breakpoints declared; give --points or --grid to choose "
                "evaluation locations"
            )
    else:
        raise _ValidationError("series input carries no breakpoints; give --points or --grid")
    return pts


def _true_jump(f, x: float) -> float:
    return true_jump(f, x) if f is not None else math.nan


def _estimator(config: RunConfig, series, basis: str):
    method = config.method
    if method == "fejer":
        return lambda x, n: fejer_jump(series, x, n)
    if method == "cesaro":
        return lambda x, n: cesaro_jump(series, x, config.alpha, n)
    if method == "integrated":
        r = 0 if config.r is None else config.r
        cfg = TailSumConfig(K_cap=config.K_cap)
        return lambda x, n: jump_from_integrated(series, x, r, n, cfg)
    if method == "conjugate":
        r = 1 if config.r is None else config.r
        cfg = TailSumConfig(K_cap=config.K_cap)
        return lambda x, n: jump_from_conjugate(series, x, r, n, cfg)
    # chebyshev
    return lambda x, n: chebmod.jump_from_chebyshev(
        series, x, chebmod.ChebyshevTailConfig(n=n, K_cap=config.K_cap)
    )


def _check_schedule(ns: Sequence[int], series) -> None:
    if ns[-1] > series.K:
        raise _ValidationError(
            f"n-schedule reaches {ns[-1]} but the series stores only K={series.K} "
            "coefficients"
        )


def _flag_divergence(x: float, estimates: Sequence[float]) -> None:
    mags = [abs(v) for v in estimates]
    if len(mags) < 3 or mags[0] <= 0.0 or mags[-1] < 1e-9:
        return
    if mags[-1] >= 1.25 * mags[0]:
        increases = sum(1 for a, b in zip(mags, mags[1:]) if b > a)
        if increases >= 0.7 * (len(mags) - 1):
            warnings.warn(
                f"estimates at x={x!r} grow with n instead of converging; the "
                "series may not come from a regulated function or the method "
                "assumptions fail here",
                PrecisionWarning,
                stacklevel=2,
            )


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def _cmd_coeffs(config: RunConfig) -> str:
    f, series = _load(config)
    if series is None:
        basis = "chebyshev" if config.basis == "chebyshev" else "fourier"
        K = config.K_cap if config.K_cap is not None else 1000
        series = (
            chebyshev_coefficients(f, K) if basis == "chebyshev" else fourier_coefficients(f, K)
        )
    return series_to_json(series) + "\n"


def _cmd_detect(config: RunConfig) -> str:
    f, series_in = _load(config)
    basis = _resolve_basis(config, series_in)
    ns = _n_schedule(config)
    series = _series_for(config, f, series_in, basis, ns[-1])
    _check_schedule(ns, series)
    estimator = _estimator(config, series, basis)
    points = _eval_points(config, f, series_in, basis)
    rows = []
    for x in points:
        truth = _true_jump(f, x)
        ests = [estimator(x, n).value for n in ns]
        _flag_divergence(x, ests)
        for n, est in zip(ns, ests):
            rows.append((x, n, est, truth, abs(est - truth)))
    rows.sort(key=lambda row: (row[0], row[1]))
    return _table_text(config, ("x", "n", "estimate", "true_jump", "abs_error"), rows)


def _cmd_table(config: RunConfig) -> str:
    f, series_in = _load(config)
    basis = _resolve_basis(config, series_in)
    ns = _n_schedule(config)
    series = _series_for(config, f, series_in, basis, ns[-1])
    _check_schedule(ns, series)
    estimator = _estimator(config, series, basis)
    points = _eval_points(config, f, series_in, basis)
    if len(points) != 1:
        raise _ValidationError("table reports one location; give exactly one point")
    x = points[0]
    truth = _true_jump(f, x)
    ests = [estimator(x, n) for n in ns]
    _flag_divergence(x, [e.value for e in ests])
    if config.method in ("fejer", "cesaro"):
        rows = [
            (n, config.method, e.alpha, e.value, truth, abs(e.value - truth))
            for n, e in zip(ns, ests)
        ]
        headers = ("n", "method", "alpha", "estimate", "true_jump", "abs_error")
    else:
        rows = [
            (n, e.method, e.r, e.value, truth, abs(e.value - truth), e.remainder_bound)
            for n, e in zip(ns, ests)
        ]
        headers = ("n", "r", "method", "estimate", "true_jump", "abs_error", "remainder_bound")
        rows = [(n, r, m, est, tj, err, rb) for (n, m, r, est, tj, err, rb) in rows]
    return _table_text(config, headers, rows)


def sample_for_variation(f: PiecewiseFunction, density: int) -> SampleSequence:
    """Sample f for the variation analyzer: a uniform grid of `density`
    points, both one-sided values at every breakpoint (adjacent entries),
    and grid-detected local extrema of each piece.
    """
    if density < 2:
        raise ValueError("density must be >= 2")
    lo, hi = f.domain
    bps = set(f.breakpoints)
    xs = set(np.linspace(lo, hi, density).tolist()) - bps
    for i, expr in enumerate(f.pieces):
        a, b = f.edges[i], f.edges[i + 1]
        scan = np.linspace(a, b, 32 * density + 2)[1:-1]
        ys = eval_expr_array(expr, scan)
        d = np.diff(ys)
        turns = np.nonzero(d[:-1] * d[1:] < 0.0)[0]
        xs.update(float(scan[j + 1]) for j in turns if float(scan[j + 1]) not in bps)

    def _value_at(x: float) -> float:
        # domain edges sample the closure value on the inside, not the
        # periodic wrap-around
        if f.periodic:
            if x == lo:
                return one_sided_limits(f, lo)[1]
            if x == hi:
                return one_sided_limits(f, hi)[0]
        return evaluate(f, x)

    entries = [(x, 0, _value_at(x)) for x in xs]
    for bp in f.breakpoints:
        lv, rv = one_sided_limits(f, bp)
        entries.append((bp, 0, lv))
        entries.append((bp, 1, rv))
    entries.sort(key=lambda e: (e[0], e[1]))
    return SampleSequence(tuple(v for _, _, v in entries))


def _cmd_variation(config: RunConfig) -> str:
    f, series_in = _load(config)
    if f is None:
        raise _ValidationError("variation analysis needs a function spec, not a series")
    densities = config.densities or [8, 16, 32, 64]
    if any(d < 2 for d in densities):
        raise _ValidationError("densities must be >= 2")
    reports = []
    for d in sorted(set(densities)):
        s = sample_for_variation(f, d)
        reports.append(build_report(s, grid_density=d))
    label = classify(reports)
    rows = []
    for rep in reports:
        for p, val in rep.p_variation.items():
            rows.append(("p_variation", repr(float(p)), rep.grid_density, val))
        rows.append(("lambda_variation", "harmonic", rep.grid_density, rep.harmonic_variation))
        for m, val in enumerate(rep.modulus, start=1):
            rows.append(("modulus", str(m), rep.grid_density, val))
    rows.sort(key=lambda row: (row[0], row[1], row[2]))
    if config.fmt == "json":
        obj = {
            "suggested_class": str(label),
            "reports": [rep.to_json_obj() for rep in reports],
        }
        return json.dumps(obj, indent=2) + "\n"
    return _csv_text(
        ("functional", "parameter", "grid_density", "value"),
        rows,
        comments=[f"suggested_class={label}"],
    )


def _cmd_diagnose(config: RunConfig) -> str:
    if config.check == "sawtooth_bound":
        ns = config.n_list or [10, 100, 1000]
        sups = chebmod.sawtooth_tail_bound_check(ns)
        return _table_text(config, ("n", "sup_n_times_tail"), list(zip(ns, sups)))
    f, series_in = _load(config)
    ns = config.n_list or [10, 100, 1000]
    if config.check == "v2":
        series = _series_for(config, f, series_in, "fourier", max(ns))
        u = v2_tail_diagnostic(series, ns)
        return _table_text(config, ("n", "u_n"), list(zip(ns, u)))
    if config.check == "sn":
        series = _series_for(config, f, series_in, "fourier", max(ns))
        rows = []
        for n in ns:
            s = s_n_diagnostic(series, 0.0 if not config.points else config.points[0], n)
            rows.append((n, s, math.pi * s))
        return _table_text(config, ("n", "s_n", "pi_s_n"), rows)
    # parseval
    if f is None:
        raise _ValidationError("the increment check needs a function spec input")
    series = _series_for(config, f, series_in, "fourier", max(ns))
    rows = []
    for n in ns:
        lhs, rhs = parseval_increment_check(f, series, n)
        rows.append((n, lhs, rhs, abs(lhs - rhs)))
    return _table_text(config, ("n", "lhs", "rhs", "abs_diff"), rows)


# ---------------------------------------------------------------------------
# Output formatting
# ---------------------------------------------------------------------------

def _fmt_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _csv_text(headers, rows, comments: Optional[list[str]] = None) -> str:
    buf = io.StringIO()
    for c in comments or []:
        buf.write(f"# {c}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    for row in rows:
        writer.writerow([_fmt_cell(v) for v in row])
    return buf.getvalue()


def _json_text(headers, rows, extra: Optional[dict] = None) -> str:
    obj = dict(extra or {})
    obj["columns"] = list(headers)
    obj["rows"] = [list(row) for row in rows]
    return json.dumps(obj, indent=2) + "\n"


def _table_text(config: RunConfig, headers, rows) -> str:
    if config.fmt == "json":
        return _json_text(headers, rows)
    return _csv_text(headers, rows)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    handlers = {
        "coeffs": _cmd_coeffs,
        "detect": _cmd_detect,
        "table": _cmd_table,
        "variation": _cmd_variation,
        "diagnose": _cmd_diagnose,
    }
    if config.command not in handlers:
        print(f"error: unknown command {config.command!r}", file=sys.stderr)
        return 1
    if config.method not in _METHODS:
        print(f"error: unknown method {config.method!r}", file=sys.stderr)
        return 1
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        try:
            text = handlers[config.command](config)
        except _ValidationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        except ValueError as exc:
            where = f"{config.input}: " if config.input else ""
            print(f"error: {where}{exc}", file=sys.stderr)
            return 1
    if config.out:
        with open(config.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    precision = [w for w in caught if issubclass(w.category, PrecisionWarning)]
    for w in precision:
        print(f"warning: {w.message}", file=sys.stderr)
    if config.strict and precision:
        return 2
    return 0


def _float_list(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _int_list(text: str) -> list[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="specjump",
        description="Jump detection and variation analysis from coefficient data.",
    )
    p.add_argument("--input", help="function-spec file or series JSON file")
    p.add_argument("--command", required=True, choices=_COMMANDS)
    p.add_argument("--method", default="fejer", choices=_METHODS)
    p.add_argument("--basis", default="auto", choices=("auto", "fourier", "chebyshev"))
    p.add_argument("--r", type=int, default=None, help="integration order")
    p.add_argument("--alpha", type=float, default=1.0, help="Cesaro order")
    p.add_argument("--n0", type=int, default=25, help="n-schedule start")
    p.add_argument("--nmax", type=int, default=400, help="n-schedule cap (doubling)")
    p.add_argument("--points", type=_float_list, help="comma-separated x values")
    p.add_argument("--grid", type=int, help="uniform x-grid size")
    p.add_argument("--Kcap", type=int, dest="K_cap", help="coefficient cutoff")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", default="csv", choices=("csv", "json"), dest="fmt")
    p.add_argument("--strict", action="store_true", help="precision warnings exit 2")
    p.add_argument("--check", default="v2", choices=_CHECKS, help="diagnose selector")
    p.add_argument("--n-list", type=_int_list, dest="n_list", help="explicit n values")
    p.add_argument("--densities", type=_int_list, help="variation grid densities")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for usage errors; usage errors are
        # validation failures here
        return 0 if exc.code == 0 else 1
    config = RunConfig(
        command=args.command,
        input=args.input,
        method=args.method,
        basis=args.basis,
        r=args.r,
        alpha=args.alpha,
        n0=args.n0,
        nmax=args.nmax,
        points=args.points,
        grid=args.grid,
        K_cap=args.K_cap,
        out=args.out,
        fmt=args.fmt,
        strict=args.strict,
        check=args.check,
        n_list=args.n_list,
        densities=args.densities,
    )
    return run(config)


def entry() -> None:
    sys.exit(main())
