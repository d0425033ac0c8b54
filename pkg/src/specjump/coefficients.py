"""Fourier and Chebyshev coefficients of piecewise functions.

Coefficients are computed either in closed form (piecewise polynomials of
degree at most three) or by composite Gauss-Legendre quadrature whose panels
never straddle a breakpoint.  Quadrature results are accepted only after a
panel-doubling agreement test, so a stored series is trustworthy to the
tolerance baked in here.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .funcspec import (
    Call,
    Expression,
    Neg,
    Num,
    PiecewiseFunction,
    Var,
    eval_expr_array,
)

__all__ = [
    "FourierSeries",
    "ChebyshevSeries",
    "AccuracyError",
    "fourier_coefficients",
    "chebyshev_coefficients",
    "A_k",
    "rho",
    "partial_sum",
    "sawtooth_series",
    "jump_part_series",
    "series_to_json",
    "series_from_json",
]

_DOUBLING_TOL = 1e-12
_MAX_DOUBLINGS = 8
_K_CHUNK = 128


class AccuracyError(RuntimeError):
    """A numerical cross-check failed: quadrature did not converge under
    panel doubling, or two independent evaluation routes disagree."""


@dataclass(frozen=True)
class FourierSeries:
    """Coefficients a_k, b_k of f ~ a0_half + sum a_k cos kx + b_k sin kx.

    a[0] is a_1 (there is no index-zero entry; the mean sits in a0_half).
    provenance records how the numbers were produced.
    """

    K: int
    a0_half: float
    a: tuple[float, ...]
    b: tuple[float, ...]
    provenance: str = "unknown"

    def __post_init__(self):
        if len(self.a) != self.K or len(self.b) != self.K:
            raise ValueError(f"need exactly K={self.K} entries in a and b")


@dataclass(frozen=True)
class ChebyshevSeries:
    """Coefficients c_k of f ~ sum c_k T_k(x) on [-1, 1]; c[0] is c_0."""

    K: int
    c: tuple[float, ...]
    provenance: str = "unknown"

    def __post_init__(self):
        if len(self.c) != self.K + 1:
            raise ValueError(f"need K+1={self.K + 1} entries in c")


# ---------------------------------------------------------------------------
# Closed forms for piecewise polynomials
# ---------------------------------------------------------------------------

def _as_polynomial(expr: Expression) -> Optional[list[float]]:
    """Power-basis coefficients [p0, p1, ...] if expr is polynomial, else None."""
    if isinstance(expr, Num):
        return [expr.value]
    if isinstance(expr, Var):
        return [0.0, 1.0]
    if isinstance(expr, Neg):
        inner = _as_polynomial(expr.operand)
        return None if inner is None else [-c for c in inner]
    if isinstance(expr, Call):
        return None
    left = _as_polynomial(expr.left)
    right = _as_polynomial(expr.right)
    if expr.op == "^":
        if left is None:
            return None
        e = int(expr.right.value)
        if e < 0:
            return None
        out = [1.0]
        for _ in range(e):
            out = _poly_mul(out, left)
        return out
    if left is None or right is None:
        return None
    if expr.op == "+":
        return _poly_add(left, right)
    if expr.op == "-":
        return _poly_add(left, [-c for c in right])
    if expr.op == "*":
        return _poly_mul(left, right)
    if expr.op == "/":
        if len(right) == 1:
            return [c / right[0] for c in left]
        return None
    return None


def _poly_add(p, q):
    n = max(len(p), len(q))
    return [(p[i] if i < len(p) else 0.0) + (q[i] if i < len(q) else 0.0) for i in range(n)]


def _poly_mul(p, q):
    out = [0.0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_eval(p, t):
    acc = 0.0
    for c in reversed(p):
        acc = acc * t + c
    return acc


def _int_tm_cos(m: int, ks: np.ndarray, t: float) -> np.ndarray:
    """Antiderivative of t^m cos(kt) for m in 0..3, vectorized over k > 0."""
    s, c = np.sin(ks * t), np.cos(ks * t)
    if m == 0:
        return s / ks
    if m == 1:
        return t * s / ks + c / ks**2
    if m == 2:
        return t**2 * s / ks + 2 * t * c / ks**2 - 2 * s / ks**3
    return t**3 * s / ks + 3 * t**2 * c / ks**2 - 6 * t * s / ks**3 - 6 * c / ks**4


def _int_tm_sin(m: int, ks: np.ndarray, t: float) -> np.ndarray:
    """Antiderivative of t^m sin(kt) for m in 0..3, vectorized over k > 0."""
    s, c = np.sin(ks * t), np.cos(ks * t)
    if m == 0:
        return -c / ks
    if m == 1:
        return -t * c / ks + s / ks**2
    if m == 2:
        return -(t**2) * c / ks + 2 * t * s / ks**2 + 2 * c / ks**3
    return -(t**3) * c / ks + 3 * t**2 * s / ks**2 + 6 * t * c / ks**3 - 6 * s / ks**4


_CF_CHUNK = 1 << 16


def _closed_form_fourier(polys, edges, K: int) -> FourierSeries:
    period = edges[-1] - edges[0]
    half = period / 2.0
    mean_terms = []
    for p, (lo, hi) in zip(polys, zip(edges, edges[1:])):
        anti = [0.0] + [c / (m + 1) for m, c in enumerate(p)]
        mean_terms.append(_poly_eval(anti, hi) - _poly_eval(anti, lo))
    a0_half = math.fsum(mean_terms) / period
    terms = [
        (c, m, lo, hi)
        for p, (lo, hi) in zip(polys, zip(edges, edges[1:]))
        for m, c in enumerate(p)
        if c != 0.0
    ]
    a = np.zeros(K)
    b = np.zeros(K)
    for start in range(0, K, _CF_CHUNK):
        stop = min(start + _CF_CHUNK, K)
        ks = np.arange(start + 1, stop + 1, dtype=float)
        acc_a = np.zeros(len(ks))
        acc_b = np.zeros(len(ks))
        for c, m, lo, hi in terms:
            acc_a += c * (_int_tm_cos(m, ks, hi) - _int_tm_cos(m, ks, lo))
            acc_b += c * (_int_tm_sin(m, ks, hi) - _int_tm_sin(m, ks, lo))
        a[start:stop] = acc_a / half
        b[start:stop] = acc_b / half
    return FourierSeries(K, a0_half, tuple(a.tolist()), tuple(b.tolist()), provenance="closed_form")


def _poly_to_cos_poly(p) -> list[float]:
    """Rewrite p(cos t) as sum q_j cos(j t) for deg p <= 3.

    cos^2 = (1 + cos 2t)/2, cos^3 = (3 cos t + cos 3t)/4.
    """
    p = list(p) + [0.0] * (4 - len(p))
    q0 = p[0] + p[2] / 2.0
    q1 = p[1] + 3.0 * p[3] / 4.0
    q2 = p[2] / 2.0
    q3 = p[3] / 4.0
    return [q0, q1, q2, q3]


def _int_cos_cos(j: int, ks: np.ndarray, t: float) -> np.ndarray:
    """Antiderivative of cos(jt) cos(kt), vectorized over k >= 0, fixed j."""
    dif = ks - j
    sm = ks + j
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.sin(dif * t) / (2.0 * dif) + np.sin(sm * t) / (2.0 * sm)
    eq = dif == 0.0
    if eq.any():
        out[eq] = t if j == 0 else t / 2.0 + math.sin(2 * j * t) / (4 * j)
    return out


def _closed_form_chebyshev(polys, edges, K: int) -> ChebyshevSeries:
    # theta-side breakpoints: theta = arccos(x), descending x maps to ascending theta
    thetas = [math.acos(max(-1.0, min(1.0, x))) for x in reversed(edges)]
    qs = [_poly_to_cos_poly(p) for p in reversed(polys)]
    terms = [
        (coef, j, lo, hi)
        for q, (lo, hi) in zip(qs, zip(thetas, thetas[1:]))
        for j, coef in enumerate(q)
        if coef != 0.0
    ]
    c = np.zeros(K + 1)
    for start in range(0, K + 1, _CF_CHUNK):
        stop = min(start + _CF_CHUNK, K + 1)
        ks = np.arange(start, stop, dtype=float)
        acc = np.zeros(len(ks))
        for coef, j, lo, hi in terms:
            acc += coef * (_int_cos_cos(j, ks, hi) - _int_cos_cos(j, ks, lo))
        c[start:stop] = acc * (2.0 / math.pi)
    c[0] /= 2.0
    return ChebyshevSeries(K, tuple(c.tolist()), provenance="closed_form")


# ---------------------------------------------------------------------------
# Gauss-Legendre machinery
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)


def _panel_nodes(edges, panels_per_piece):
    """Nodes and weights for a composite 16-point GL rule on each piece."""
    xs, ws = [], []
    for (lo, hi), n_panels in zip(zip(edges, edges[1:]), panels_per_piece):
        bounds = np.linspace(lo, hi, n_panels + 1)
        for a, b in zip(bounds, bounds[1:]):
            mid, rad = (a + b) / 2.0, (b - a) / 2.0
            xs.append(mid + rad * _GL_NODES)
            ws.append(rad * _GL_WEIGHTS)
    return np.concatenate(xs), np.concatenate(ws)


def _fourier_from_nodes(f, xs, ws, K, period_half):
    fx = _piece_values(f, xs)
    wf = ws * fx
    a0_half = float(np.sum(wf)) / (2.0 * period_half)
    a = np.empty(K)
    b = np.empty(K)
    for start in range(0, K, _K_CHUNK):
        ks = np.arange(start + 1, min(start + _K_CHUNK, K) + 1)
        phase = np.outer(ks, xs)
        a[start : start + len(ks)] = (np.cos(phase) @ wf) / period_half
        b[start : start + len(ks)] = (np.sin(phase) @ wf) / period_half
    return a0_half, a, b


def _piece_values(f: PiecewiseFunction, xs: np.ndarray) -> np.ndarray:
    """Evaluate using piece expressions directly; xs never hits an edge."""
    out = np.empty_like(xs)
    edges = f.edges
    for i, expr in enumerate(f.pieces):
        mask = (xs > edges[i]) & (xs < edges[i + 1])
        if mask.any():
            out[mask] = eval_expr_array(expr, xs[mask])
    return out


def fourier_coefficients(f: PiecewiseFunction, K: int, quad: str = "auto") -> FourierSeries:
    """Fourier coefficients of f up to frequency K.

    quad is "auto" (closed form when available), "closed_form" (error if the
    pieces are not polynomial of degree <= 3), or "quadrature".
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    lo, hi = f.domain
    if not math.isclose(hi - lo, 2.0 * math.pi):
        raise ValueError("Fourier coefficients require a domain of length 2 pi")
    polys = [_as_polynomial(e) for e in f.pieces]
    closed_ok = all(p is not None and len(p) <= 4 for p in polys)
    if quad == "closed_form" or (quad == "auto" and closed_ok):
        if not closed_ok:
            raise ValueError("closed form requires polynomial pieces of degree <= 3")
        return _closed_form_fourier(polys, f.edges, K)
    if quad not in ("auto", "quadrature"):
        raise ValueError(f"unknown quad mode {quad!r}")

    edges = f.edges
    period_half = (edges[-1] - edges[0]) / 2.0
    # resolve cos(Kx): start near 8 panels per period of the top frequency
    base = [
        max(2, int(math.ceil(K * (hi - lo) / (2.0 * math.pi) * 2)))
        for lo, hi in zip(edges, edges[1:])
    ]
    prev = None
    for attempt in range(_MAX_DOUBLINGS + 1):
        mult = 2**attempt
        xs, ws = _panel_nodes(edges, [n * mult for n in base])
        cur = _fourier_from_nodes(f, xs, ws, K, period_half)
        if prev is not None:
            delta = max(
                abs(cur[0] - prev[0]),
                float(np.max(np.abs(cur[1] - prev[1]))),
                float(np.max(np.abs(cur[2] - prev[2]))),
            )
            if delta < _DOUBLING_TOL:
                return FourierSeries(
                    K,
                    cur[0],
                    tuple(cur[1].tolist()),
                    tuple(cur[2].tolist()),
                    provenance="quadrature",
                )
        prev = cur
    raise AccuracyError(
        f"Fourier quadrature did not converge after {_MAX_DOUBLINGS} doublings"
    )


def chebyshev_coefficients(f: PiecewiseFunction, K: int, quad: str = "auto") -> ChebyshevSeries:
    """Chebyshev coefficients c_0..c_K of f on [-1, 1].

    Computed in theta variables: c_k = (2/pi) * integral_0^pi f(cos t) cos(kt) dt
    (half weight at k = 0), with quadrature panels split at the theta images
    of the breakpoints.
    """
    if K < 1:
        raise ValueError("K must be >= 1")
    lo, hi = f.domain
    if not (math.isclose(lo, -1.0) and math.isclose(hi, 1.0)):
        raise ValueError("Chebyshev coefficients require domain [-1, 1]")
    polys = [_as_polynomial(e) for e in f.pieces]
    closed_ok = all(p is not None and len(p) <= 4 for p in polys)
    if quad == "closed_form" or (quad == "auto" and closed_ok):
        if not closed_ok:
            raise ValueError("closed form requires polynomial pieces of degree <= 3")
        return _closed_form_chebyshev(polys, f.edges, K)
    if quad not in ("auto", "quadrature"):
        raise ValueError(f"unknown quad mode {quad!r}")

    # theta edges ascending; x edge -1 maps to pi
    theta_edges = [math.acos(max(-1.0, min(1.0, x))) for x in reversed(f.edges)]
    exprs = list(reversed(f.pieces))
    base = [
        max(2, int(math.ceil(K * (hi_t - lo_t) / (2.0 * math.pi) * 2)))
        for lo_t, hi_t in zip(theta_edges, theta_edges[1:])
    ]
    prev = None
    for attempt in range(_MAX_DOUBLINGS + 1):
        mult = 2**attempt
        ts, ws = _panel_nodes(theta_edges, [n * mult for n in base])
        g = np.empty_like(ts)
        for i, expr in enumerate(exprs):
            mask = (ts > theta_edges[i]) & (ts < theta_edges[i + 1])
            if mask.any():
                g[mask] = eval_expr_array(expr, np.cos(ts[mask]))
        wg = ws * g
        c = np.empty(K + 1)
        for start in range(0, K + 1, _K_CHUNK):
            ks = np.arange(start, min(start + _K_CHUNK, K + 1))
            c[start : start + len(ks)] = (np.cos(np.outer(ks, ts)) @ wg) * (2.0 / math.pi)
        c[0] /= 2.0
        if prev is not None and float(np.max(np.abs(c - prev))) < _DOUBLING_TOL:
            return ChebyshevSeries(K, tuple(c.tolist()), provenance="quadrature")
        prev = c
    raise AccuracyError(
        f"Chebyshev quadrature did not converge after {_MAX_DOUBLINGS} doublings"
    )


# ---------------------------------------------------------------------------
# Series accessors
# ---------------------------------------------------------------------------

def A_k(series: FourierSeries, x0: float, k: int) -> float:
    """Conjugate-phase coefficient a_k sin(k x0) - b_k cos(k x0)."""
    if not (1 <= k <= series.K):
        raise ValueError(f"k={k} outside stored range 1..{series.K}")
    return series.a[k - 1] * math.sin(k * x0) - series.b[k - 1] * math.cos(k * x0)


def rho(series: FourierSeries, k: int) -> float:
    """Spectral amplitude sqrt(a_k^2 + b_k^2)."""
    if not (1 <= k <= series.K):
        raise ValueError(f"k={k} outside stored range 1..{series.K}")
    return math.hypot(series.a[k - 1], series.b[k - 1])


def partial_sum(series: FourierSeries, x: float, n: int) -> float:
    """Value of the degree-n trigonometric partial sum at x."""
    if not (1 <= n <= series.K):
        raise ValueError(f"n={n} outside stored range 1..{series.K}")
    terms = [
        series.a[k - 1] * math.cos(k * x) + series.b[k - 1] * math.sin(k * x)
        for k in range(1, n + 1)
    ]
    return series.a0_half + math.fsum(terms)


# ---------------------------------------------------------------------------
# Analytic reference series
# ---------------------------------------------------------------------------

def sawtooth_series(K: int) -> FourierSeries:
    """The 2pi-periodic odd sawtooth with unit harmonic amplitudes b_k = 1/k.

    This is (pi - x)/2 on (0, 2pi), jump +pi at x = 0.
    """
    b = tuple(1.0 / k for k in range(1, K + 1))
    return FourierSeries(K, 0.0, (0.0,) * K, b, provenance="closed_form")


def jump_part_series(jumps: list[tuple[float, float]], K: int) -> FourierSeries:
    """Series of the pure jump part: shifted sawtooths scaled by magnitude / pi.

    Each (location, magnitude) contributes magnitude/pi times the unit
    sawtooth translated to the location, so the sum carries exactly the
    given jumps and nothing else.
    """
    a = np.zeros(K)
    b = np.zeros(K)
    ks = np.arange(1, K + 1, dtype=float)
    for theta0, jump in jumps:
        a += -(jump / math.pi) * np.sin(ks * theta0) / ks
        b += (jump / math.pi) * np.cos(ks * theta0) / ks
    return FourierSeries(K, 0.0, tuple(a.tolist()), tuple(b.tolist()), provenance="closed_form")


# ---------------------------------------------------------------------------
# Serialization (bit-exact round trips via repr floats)
# ---------------------------------------------------------------------------

def series_to_json(series: FourierSeries | ChebyshevSeries) -> str:
    """Serialize a series; json emits floats via repr, so every bit survives."""
    if isinstance(series, FourierSeries):
        obj = {
            "kind": "fourier",
            "K": series.K,
            "a0_half": float(series.a0_half),
            "a": [float(v) for v in series.a],
            "b": [float(v) for v in series.b],
            "provenance": series.provenance,
        }
    elif isinstance(series, ChebyshevSeries):
        obj = {
            "kind": "chebyshev",
            "K": series.K,
            "c": [float(v) for v in series.c],
            "provenance": series.provenance,
        }
    else:
        raise TypeError(f"not a series: {type(series).__name__}")
    return json.dumps(obj, indent=2)


def series_from_json(text: str) -> FourierSeries | ChebyshevSeries:
    """Inverse of series_to_json."""
    obj = json.loads(text)
    kind = obj.get("kind")
    prov = obj.get("provenance", "unknown")
    if kind == "fourier":
        return FourierSeries(
            int(obj["K"]),
            float(obj["a0_half"]),
            tuple(float(v) for v in obj["a"]),
            tuple(float(v) for v in obj["b"]),
            provenance=prov,
        )
    if kind == "chebyshev":
        return ChebyshevSeries(
            int(obj["K"]), tuple(float(v) for v in obj["c"]), provenance=prov
        )
    raise ValueError(f"unknown series kind {kind!r}")
