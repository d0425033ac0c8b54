"""Jump estimators built from integrated Fourier tails, plus diagnostics.

The r-times-integrated tail of a Fourier series at x0 decays like n^-(2r+1)
with a coefficient proportional to the jump of the function at x0; inverting
that relation estimates the jump from nothing but tail sums.  A conjugate
variant decays like n^-2r (r >= 1 only).  The diagnostics monitor the
summability facts those estimators rest on.

Tails are truncated at K_cap; the error of truncation is modeled from the
stored coefficients (|A_k| <= rho_k with rho_k * k roughly bounded near the
cutoff, the decay a function of bounded variation exhibits) and reported as
remainder_bound.  Integration constants never arise: tails start at k = n
and contain no constant term.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .coefficients import A_k, AccuracyError, FourierSeries, _panel_nodes
from .funcspec import PiecewiseFunction, evaluate

__all__ = [
    "PrecisionWarning",
    "JumpEstimate",
    "TailSumConfig",
    "integrated_tail",
    "jump_from_integrated",
    "conjugate_tail",
    "jump_from_conjugate",
    "s_n_diagnostic",
    "v2_tail_diagnostic",
    "parseval_increment_check",
]

_METHODS = ("fejer", "cesaro", "integrated_tail", "conjugate_tail", "chebyshev_tail")


class PrecisionWarning(UserWarning):
    """A returned value may carry more truncation error than its use implies."""


@dataclass(frozen=True)
class JumpEstimate:
    """One jump estimate f(x0+0) - f(x0-0) with its provenance.

    remainder_bound, when present, bounds the truncation error contribution
    in the same units as value.
    """

    method: str
    x0: float
    n: int
    value: float
    r: Optional[int] = None
    alpha: Optional[float] = None
    remainder_bound: Optional[float] = None

    def __post_init__(self):
        if self.method not in _METHODS:
            raise ValueError(f"unknown method {self.method!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")


@dataclass(frozen=True)
class TailSumConfig:
    """Truncation policy for tail sums.

    K_cap: summation cutoff; defaults to min(series.K, max(1e6, 100 n)) for
    closed-form series and to series.K otherwise.
    remainder_bound: optional caller-supplied bound on the discarded tail
    sum (tail units); when None a bound is modeled from the coefficients.
    """

    K_cap: Optional[int] = None
    remainder_bound: Optional[float] = None


def _resolve_K(series: FourierSeries, n: int, cfg: Optional[TailSumConfig]) -> int:
    if n < 1:
        raise ValueError("n must be >= 1")
    if cfg is not None and cfg.K_cap is not None:
        K = min(cfg.K_cap, series.K)
    elif series.provenance == "closed_form":
        K = min(series.K, max(10**6, 100 * n))
    else:
        K = series.K
    if K < n:
        raise ValueError(f"K_cap={K} smaller than tail start n={n}")
    return K


def _tail_sum(series: FourierSeries, x0: float, n: int, K: int, power: int) -> float:
    ks = np.arange(n, K + 1, dtype=float)
    a = np.asarray(series.a[n - 1 : K])
    b = np.asarray(series.b[n - 1 : K])
    A = a * np.sin(ks * x0) - b * np.cos(ks * x0)
    return math.fsum((A / ks**power).tolist())


def _rho_star(series: FourierSeries, n: int, K: int) -> float:
    """Windowed estimate of sup(rho_k * k) / K near the cutoff; the scale
    factor of the BV-decay model rho_k <= rho_star * K / k used beyond K."""
    w = max(10, K // 100)
    lo = max(n, K - w + 1)
    ks = np.arange(lo, K + 1, dtype=float)
    a = np.asarray(series.a[lo - 1 : K])
    b = np.asarray(series.b[lo - 1 : K])
    return float(np.max(np.hypot(a, b) * ks)) / K if len(ks) else 0.0


def _checked(result: float, bound: float, what: str) -> None:
    if bound > 0.01 * abs(result):
        warnings.warn(
            f"{what}: truncation remainder bound {bound:.3g} exceeds 1% of "
            f"the result {result:.6g}; raise K_cap or supply more coefficients",
            PrecisionWarning,
            stacklevel=3,
        )


def _integrated_parts(series, x0, r, n, cfg):
    if not (isinstance(r, int) and r >= 0):
        raise ValueError("r must be a nonnegative integer")
    K = _resolve_K(series, n, cfg)
    raw = _tail_sum(series, x0, n, K, 2 * r + 1)
    value = raw if r % 2 == 0 else -raw
    if cfg is not None and cfg.remainder_bound is not None:
        bound = cfg.remainder_bound
    else:
        # sum_{k>K} rho* K / k^(2r+2) <= rho* / ((2r+1) K^(2r))
        bound = _rho_star(series, n, K) / ((2 * r + 1) * float(K) ** (2 * r))
    return value, bound, K


def integrated_tail(
    series: FourierSeries, x0: float, r: int, n: int, cfg: Optional[TailSumConfig] = None
) -> float:
    """(-1)^r sum_{k=n}^{K_cap} (a_k sin k x0 - b_k cos k x0) / k^(2r+1).

    Emits PrecisionWarning when the modeled remainder beyond K_cap exceeds
    1% of the result.
    """
    value, bound, _ = _integrated_parts(series, x0, r, n, cfg)
    _checked(value, bound, "integrated_tail")
    return value


def jump_from_integrated(
    series: FourierSeries, x0: float, r: int, n: int, cfg: Optional[TailSumConfig] = None
) -> JumpEstimate:
    """Jump estimate (-1)^(r+1) (2r+1) pi n^(2r+1) times the integrated tail."""
    tail, bound, _ = _integrated_parts(series, x0, r, n, cfg)
    _checked(tail, bound, "jump_from_integrated")
    scale = (2 * r + 1) * math.pi * float(n) ** (2 * r + 1)
    sign = -1.0 if r % 2 == 0 else 1.0
    return JumpEstimate(
        method="integrated_tail",
        x0=x0,
        n=n,
        value=sign * scale * tail,
        r=r,
        remainder_bound=scale * bound,
    )


def _conjugate_parts(series, x0, r, n, cfg):
    if not (isinstance(r, int) and r >= 1):
        raise ValueError("conjugate tails require r >= 1")
    K = _resolve_K(series, n, cfg)
    raw = _tail_sum(series, x0, n, K, 2 * r)
    value = raw if r % 2 == 0 else -raw
    if cfg is not None and cfg.remainder_bound is not None:
        bound = cfg.remainder_bound
    else:
        # sum_{k>K} rho* K / k^(2r+1) <= rho* / (2r K^(2r-1))
        bound = _rho_star(series, n, K) / (2 * r * float(K) ** (2 * r - 1))
    return value, bound, K


def conjugate_tail(
    series: FourierSeries, x0: float, r: int, n: int, cfg: Optional[TailSumConfig] = None
) -> float:
    """(-1)^r sum_{k=n}^{K_cap} (a_k sin k x0 - b_k cos k x0) / k^(2r), r >= 1.

    The even-power analogue of integrated_tail; its k^(-2r) weights are the
    term-by-term antiderivatives of the conjugate series, the convention
    validated by the sawtooth limit n^2 sum 1/k^3 -> 1/2.
    """
    value, bound, _ = _conjugate_parts(series, x0, r, n, cfg)
    _checked(value, bound, "conjugate_tail")
    return value


def jump_from_conjugate(
    series: FourierSeries, x0: float, r: int, n: int, cfg: Optional[TailSumConfig] = None
) -> JumpEstimate:
    """Jump estimate (-1)^(r+1) 2r pi n^(2r) times the conjugate tail."""
    tail, bound, _ = _conjugate_parts(series, x0, r, n, cfg)
    _checked(tail, bound, "jump_from_conjugate")
    scale = 2 * r * math.pi * float(n) ** (2 * r)
    sign = -1.0 if r % 2 == 0 else 1.0
    return JumpEstimate(
        method="conjugate_tail",
        x0=x0,
        n=n,
        value=sign * scale * tail,
        r=r,
        remainder_bound=scale * bound,
    )


def s_n_diagnostic(series: FourierSeries, x0: float, n: int) -> float:
    """-(1/n) sum_{k=1}^{n} k A_k; estimates jump/pi and cross-checks the
    Fejer estimator (pi times this value reproduces it bit for bit)."""
    if not (1 <= n <= series.K):
        raise ValueError(f"n={n} outside stored range 1..{series.K}")
    terms = [k * A_k(series, x0, k) for k in range(1, n + 1)]
    return -(math.fsum(terms) / n)


def v2_tail_diagnostic(series: FourierSeries, n_values: Sequence[int]) -> list[float]:
    """u_n = n sum_{k=n}^{K} rho_k^2 for each n; bounded when the function
    has finite quadratic variation.

    Warns when the modeled rho^2 mass beyond K could move any u_n by more
    than 1% of the smallest one.
    """
    n_list = [int(n) for n in n_values]
    if not n_list:
        return []
    K = series.K
    for n in n_list:
        if not (1 <= n <= K):
            raise ValueError(f"n={n} outside stored range 1..{K}")
    a = np.asarray(series.a)
    b = np.asarray(series.b)
    r2 = np.hypot(a, b) ** 2
    tail = np.cumsum(r2[::-1])[::-1]
    out = [n * float(tail[n - 1]) for n in n_list]
    # discarded mass: sum_{k>K} rho_k^2 <= rho_K^2 K under rho ~ C/k decay
    bound = max(n_list) * float(r2[-1]) * K
    if bound > 0.01 * min(out):
        warnings.warn(
            f"v2_tail_diagnostic: discarded-tail bound {bound:.3g} exceeds 1% "
            f"of the smallest u_n {min(out):.6g}; K={K} is too small for these n",
            PrecisionWarning,
            stacklevel=2,
        )
    return out


_PARSEVAL_TOL = 1e-12
_PARSEVAL_MAX_DOUBLINGS = 10


def parseval_increment_check(
    f: PiecewiseFunction, series: FourierSeries, n: int, quad: str = "auto"
) -> tuple[float, float]:
    """Both sides of the shifted-increment identity
    (1/pi) integral [f(x + pi/n) - f(x)]^2 dx = 4 sum rho_m^2 sin^2(m pi / 2n).

    lhs by panelled Gauss-Legendre quadrature split at every point where x or
    x + pi/n crosses a breakpoint; rhs from the stored coefficients plus a
    modeled correction for the discarded tail (rho_m ~ rho* K / m decay with
    sin^2 averaging to 1/2, contributing 2 rho*^2 K).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if quad not in ("auto", "quadrature"):
        raise ValueError(f"unknown quad mode {quad!r}")
    lo, hi = f.domain
    if not f.periodic or not math.isclose(hi - lo, 2.0 * math.pi):
        raise ValueError("the increment identity needs a 2 pi periodic function")
    h = math.pi / n
    period = hi - lo

    ms = np.arange(1, series.K + 1, dtype=float)
    r2 = np.hypot(np.asarray(series.a), np.asarray(series.b)) ** 2
    rhs = 4.0 * math.fsum((r2 * np.sin(ms * (h / 2.0)) ** 2).tolist())
    rhs += 2.0 * _rho_star(series, 1, series.K) ** 2 * series.K

    crossings = set()
    for bp in list(f.breakpoints) + [lo]:
        crossings.add(bp)
        back = bp - h
        if back < lo:
            back += period
        crossings.add(back)
    edges = sorted({lo, hi} | {c for c in crossings if lo < c < hi})

    def g(x: float) -> float:
        return (evaluate(f, x + h) - evaluate(f, x)) ** 2

    base = [max(2, int(math.ceil((b - a) / (period / 16)))) for a, b in zip(edges, edges[1:])]
    prev = None
    for attempt in range(_PARSEVAL_MAX_DOUBLINGS + 1):
        mult = 2**attempt
        xs, ws = _panel_nodes(edges, [p * mult for p in base])
        total = math.fsum((float(w) * g(float(x)) for x, w in zip(xs, ws)))
        lhs = total / math.pi
        if prev is not None and abs(lhs - prev) < _PARSEVAL_TOL:
            return lhs, rhs
        prev = lhs
    raise AccuracyError("increment quadrature did not converge under panel doubling")
