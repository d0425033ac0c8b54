"""Generalized-variation functionals on sampled data, and a growth classifier.

All functionals are suprema over index partitions of a finite sample
sequence.  Samples are expected to contain every local extremum and both
one-sided values at jumps (the CLI sampler arranges this), so the grid
supremum is the functional of the underlying function.

p_variation and phi_variation range over chains (consecutive links sharing
endpoints).  lambda_variation and modulus_of_variation range over families
of index intervals with disjoint interiors; sharing an endpoint is allowed.
"""

from __future__ import annotations

import math
import sys
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .tails import PrecisionWarning

__all__ = [
    "SampleSequence",
    "VariationReport",
    "ClassLabel",
    "Thresholds",
    "PowerPhi",
    "LambdaSequence",
    "p_variation",
    "phi_variation",
    "lambda_variation",
    "modulus_of_variation",
    "classify",
]


@dataclass(frozen=True)
class SampleSequence:
    """Finite samples of f at increasing points; jump points contribute the
    left value and the right value as adjacent entries."""

    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.values) == 0:
            raise ValueError("empty sample sequence")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("samples must be finite")

    @property
    def n_points(self) -> int:
        return len(self.values)


def _values(s) -> list[float]:
    vals = list(s.values) if isinstance(s, SampleSequence) else [float(v) for v in s]
    if not vals:
        raise ValueError("empty sample sequence")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("samples must be finite")
    return vals


# ---------------------------------------------------------------------------
# Chain functionals
# ---------------------------------------------------------------------------

def p_variation(s, p: float) -> float:
    """sup over chains i_0<...<i_m of (sum |v_{i_{j+1}} - v_{i_j}|^p)^(1/p).

    Dynamic program over chain endpoints, O(n^2); exact on the samples.
    """
    if not p >= 1.0:
        raise ValueError("p must be >= 1")
    v = np.asarray(_values(s), dtype=float)
    n = len(v)
    if n < 2:
        return 0.0
    best = np.zeros(n)
    for j in range(1, n):
        best[j] = np.max(best[:j] + np.abs(v[j] - v[:j]) ** p)
    return float(np.max(best)) ** (1.0 / p)


@dataclass(frozen=True)
class PowerPhi:
    """phi(u) = u**exponent; recognized exactly by phi_variation."""

    exponent: float

    def __post_init__(self):
        if not self.exponent >= 1.0:
            raise ValueError("exponent must be >= 1")

    def __call__(self, u: float) -> float:
        return u**self.exponent


def phi_variation(s, phi, cap: int = 18) -> float:
    """sup over chains of sum phi(|v_{i_{j+1}} - v_{i_j}|).

    PowerPhi arguments run through the p-variation machinery at any size.
    Other callables must satisfy phi(0) = 0 and are only accepted up to
    `cap` samples; the chain DP evaluates the same supremum a brute-force
    enumeration would.
    """
    vals = _values(s)
    n = len(vals)
    if isinstance(phi, PowerPhi):
        v = np.asarray(vals)
        if n < 2:
            return 0.0
        best = np.zeros(n)
        for j in range(1, n):
            best[j] = np.max(best[:j] + np.abs(v[j] - v[:j]) ** phi.exponent)
        return float(np.max(best))
    if not callable(phi):
        raise TypeError("phi must be callable or a PowerPhi")
    if n > cap:
        raise ValueError(
            f"{n} samples exceed the cap of {cap} for a general phi; "
            "use PowerPhi for power functions"
        )
    if phi(0.0) != 0.0:
        raise ValueError("phi(0) must be 0")
    if n < 2:
        return 0.0
    best = [0.0] * n
    for j in range(1, n):
        best[j] = max(best[i] + phi(abs(vals[j] - vals[i])) for i in range(j))
    return max(best)


# ---------------------------------------------------------------------------
# Weight sequences for interval-family variation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaSequence:
    """A positive nondecreasing weight-denominator sequence with divergent
    reciprocal sum.  Built-in constructors are validated symbolically;
    custom callables are only checked pointwise on the prefix that gets used
    (divergence of the reciprocal sum is taken on trust and documented).
    """

    name: str
    func: Callable[[int], float] = field(compare=False)

    @staticmethod
    def harmonic() -> "LambdaSequence":
        return LambdaSequence("harmonic", lambda t: float(t))

    @staticmethod
    def power(q: float) -> "LambdaSequence":
        # sum of t^-q diverges iff q <= 1; nondecreasing needs q >= 0
        if not (0.0 <= q <= 1.0):
            raise ValueError("power exponent must lie in [0, 1]")
        return LambdaSequence(f"power_{q:g}", lambda t: float(t) ** q)

    @staticmethod
    def constant() -> "LambdaSequence":
        return LambdaSequence("constant", lambda t: 1.0)

    def weights(self, count: int) -> list[float]:
        """Reciprocals 1/lambda_t for t = 1..count, with prefix validation."""
        lam_prev = 0.0
        out = []
        for t in range(1, count + 1):
            lam = float(self.func(t))
            if not math.isfinite(lam) or lam <= 0.0:
                raise ValueError(f"lambda_{t} = {lam} is not positive and finite")
            if lam < lam_prev:
                raise ValueError(f"lambda sequence decreases at t={t}")
            lam_prev = lam
            out.append(1.0 / lam)
        return out


def _as_lambda(lam) -> LambdaSequence:
    if isinstance(lam, LambdaSequence):
        return lam
    if callable(lam):
        return LambdaSequence("custom", lam)
    raise ValueError("lambda must be a LambdaSequence or a callable t -> lambda_t")


# ---------------------------------------------------------------------------
# Interval-family machinery
# ---------------------------------------------------------------------------

def _reduce_extrema(v: list[float]) -> list[float]:
    """Collapse plateaus and monotone interior points.

    Any interval family's oscillation multiset is weakly majorized by one
    on the local extrema, so every family functional is preserved.
    """
    out = [v[0]]
    for x in v[1:]:
        if x == out[-1]:
            continue
        if len(out) >= 2 and (out[-1] - out[-2]) * (x - out[-1]) > 0:
            out[-1] = x
        else:
            out.append(x)
    return out


def _candidates_undominated(v: list[float]) -> list[tuple[float, int, int]]:
    """Index pairs whose oscillation equals the range of their window.

    A pair whose |v_b - v_a| falls short of max-min over [a, b] is dominated
    by a pair inside the window and can never enter an optimal family.
    Sorted by descending oscillation (ties keep (a, b) generation order).
    """
    n = len(v)
    cands = []
    for a in range(n):
        wmin = wmax = v[a]
        for b in range(a + 1, n):
            if v[b] < wmin:
                wmin = v[b]
            if v[b] > wmax:
                wmax = v[b]
            o = abs(v[b] - v[a])
            if o > 0.0 and o == wmax - wmin:
                cands.append((o, a, b))
    cands.sort(key=lambda t: -t[0])
    return cands


def _maxsum_table(v: list[float], m_max: int, backtrack: bool):
    """nu(m) table for m = 1..m_max: max total oscillation of m interval
    families with disjoint interiors; optionally the chosen oscillations."""
    arr = np.asarray(v)
    n = len(v)
    E_prev = np.zeros(n)
    nu = []
    choices = []
    for _ in range(m_max):
        E = np.zeros(n)
        ch = [None] * n
        for jj in range(n):
            b = E[jj - 1] if jj else 0.0
            pick = ("skip",) if jj else None
            if jj:
                cand = E_prev[:jj] + np.abs(arr[jj] - arr[:jj])
                i = int(np.argmax(cand))
                if cand[i] > b:
                    b, pick = float(cand[i]), ("take", i)
            E[jj] = b
            ch[jj] = pick
        nu.append(float(E[n - 1]))
        choices.append(ch)
        E_prev = E
    if not backtrack:
        return nu, None
    fams = []
    for m in range(1, m_max + 1):
        osc, mm, jj = [], m, n - 1
        while mm > 0 and jj >= 0:
            pick = choices[mm - 1][jj]
            if pick is None:
                break
            if pick[0] == "skip":
                jj -= 1
            else:
                i = pick[1]
                osc.append(abs(v[jj] - v[i]))
                jj = i
                mm -= 1
        fams.append(osc)
    return nu, fams


def lambda_variation(
    s,
    lam,
    max_intervals: Optional[int] = None,
    node_budget: int = 200_000,
) -> float:
    """sup over interval families of sum |v_b - v_a| / lambda_t, the t-th
    largest oscillation paired with lambda_t.

    Exact branch-and-bound over undominated candidate intervals, seeded by
    the per-count max-sum families.  If the search exceeds node_budget (very
    irregular data) the best value found is returned and a PrecisionWarning
    reports the gap to an upper bound; a completed search is exact.
    """
    lam = _as_lambda(lam)
    if max_intervals is not None and max_intervals < 1:
        raise ValueError("max_intervals must be >= 1")
    v = _reduce_extrema(_values(s))
    n = len(v)
    if n < 2:
        return 0.0
    cands = _candidates_undominated(v)
    ncand = len(cands)
    if ncand == 0:
        return 0.0
    mcap = min(ncand, n - 1)
    if max_intervals is not None:
        mcap = min(mcap, max_intervals)
    W = lam.weights(mcap)
    oscs = [c[0] for c in cands]

    # incumbent: best max-sum family per interval count, canonically valued
    t_seed = min(mcap, 64)
    nu, fams = _maxsum_table(v, t_seed, backtrack=True)
    best = 0.0
    for osc in fams:
        osc.sort(reverse=True)
        val = math.fsum(o * w for o, w in zip(osc, W))
        if val > best:
            best = val

    best_box = [best]
    nodes = [0]
    complete = [True]
    chosen: list[tuple[int, int]] = []
    slack = 1e-12

    def canonical(fam):
        osc = sorted((abs(v[b] - v[a]) for a, b in fam), reverse=True)
        return math.fsum(o * w for o, w in zip(osc, W))

    def rec(i, q, acc):
        nodes[0] += 1
        if nodes[0] > node_budget:
            complete[0] = False
            return
        if acc > best_box[0]:
            val = canonical(chosen)
            if val > best_box[0]:
                best_box[0] = val
        if i >= ncand or q >= mcap or not complete[0]:
            return
        # candidates are sorted descending, so rank weights apply in order
        bound = acc
        r = 0
        while q + r < mcap and i + r < ncand:
            t = W[q + r] * oscs[i + r]
            bound += t
            r += 1
            if t < 1e-16 * max(bound, 1.0):
                break
        if bound <= best_box[0] + slack:
            return
        o, a, b = cands[i]
        ok = True
        for x, y in chosen:
            if a < y and x < b:
                ok = False
                break
        if ok:
            chosen.append((a, b))
            rec(i + 1, q + 1, acc + o * W[q])
            chosen.pop()
        if complete[0]:
            rec(i + 1, q, acc)

    limit = sys.getrecursionlimit()
    try:
        sys.setrecursionlimit(max(limit, ncand + 1000))
        rec(0, 0, 0.0)
    finally:
        sys.setrecursionlimit(limit)

    if not complete[0]:
        # Abel bound: sum_t (w_t - w_{t+1}) nu(t), tail controlled by the
        # total variation, which bounds nu from above
        tv = math.fsum(abs(y - x) for x, y in zip(v, v[1:]))
        ub = 0.0
        for t in range(1, t_seed + 1):
            w_next = W[t] if t < mcap else 0.0
            ub += (W[t - 1] - w_next) * nu[t - 1]
        if t_seed < mcap:
            ub += W[t_seed] * tv
        warnings.warn(
            f"variation search hit the node budget ({node_budget}); "
            f"returning {best_box[0]:.6g}, upper bound {ub:.6g} "
            f"(gap {max(ub - best_box[0], 0.0):.3g})",
            PrecisionWarning,
            stacklevel=2,
        )
    return best_box[0]


def modulus_of_variation(s, n_max: int) -> list[float]:
    """nu(m) for m = 1..n_max: max total oscillation over m index intervals
    with disjoint interiors.  Nondecreasing and concave in m."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    v = _values(s)
    if len(v) < 2:
        return [0.0] * n_max
    nu, _ = _maxsum_table(v, n_max, backtrack=False)
    return nu


# ---------------------------------------------------------------------------
# Classification against growth templates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassLabel:
    """A function class with an optional fitted parameter."""

    name: str  # BV | V_p | V[n^alpha] | HBV | W | inconclusive
    parameter: Optional[float] = None

    def __str__(self):
        if self.name == "V_p":
            return f"V_p(p={self.parameter:.3g})"
        if self.name == "V[n^alpha]":
            return f"V[n^alpha](alpha={self.parameter:.3g})"
        return self.name


@dataclass(frozen=True)
class Thresholds:
    """Knobs of the growth-template classifier.

    A functional counts as bounded under refinement when its log-log growth
    slope against grid density stays within slope_tol.  Template fits are
    accepted at R^2 >= r2_min.  The classifier is a labeled heuristic, not a
    membership proof.
    """

    slope_tol: float = 0.08
    r2_min: float = 0.9
    p_min: float = 1.0
    p_max: float = 4.0
    p_step: float = 0.25
    alpha_max: float = 0.95


@dataclass(frozen=True)
class VariationReport:
    """Functional values computed on one sample grid."""

    p_variation: dict[float, float]
    harmonic_variation: float
    lambda_variation: dict[str, float]
    modulus: tuple[float, ...]
    grid_density: Optional[int] = None
    suggested_class: Optional[ClassLabel] = None

    def to_json_obj(self) -> dict:
        return {
            "grid_density": self.grid_density,
            "p_variation": {repr(p): val for p, val in self.p_variation.items()},
            "harmonic_variation": self.harmonic_variation,
            "lambda_variation": dict(self.lambda_variation),
            "modulus": list(self.modulus),
            "suggested_class": None
            if self.suggested_class is None
            else str(self.suggested_class),
        }


def _fit_loglog(xs: Sequence[float], ys: Sequence[float]) -> tuple[float, float]:
    """Least-squares slope and R^2 of log y against log x; flat data counts
    as slope 0 with a perfect fit."""
    ys = [max(y, 0.0) for y in ys]
    if max(ys) <= 0.0:
        return 0.0, 1.0
    floor = max(ys) * 1e-15
    ly = np.log([max(y, floor) for y in ys])
    lx = np.log(np.asarray(xs, dtype=float))
    if np.ptp(ly) < 1e-3:
        return 0.0, 1.0
    A = np.vstack([lx, np.ones_like(lx)]).T
    coef, *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - A @ coef
    ss_res = float(np.dot(resid, resid))
    ss_tot = float(np.dot(ly - ly.mean(), ly - ly.mean()))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return float(coef[0]), r2


def classify(reports: Sequence[VariationReport], thresholds: Optional[Thresholds] = None) -> ClassLabel:
    """Fit functional growth across a refinement family of reports and name
    the smallest class in BV, V_p, V[n^alpha], HBV, W that stays bounded.

    Each report must carry grid_density; at least two densities are needed
    for any growth fit.  Returns ClassLabel("inconclusive") when no template
    fits within tolerance.
    """
    th = thresholds or Thresholds()
    reports = sorted(reports, key=lambda r: r.grid_density or 0)
    if len(reports) < 2 or any(r.grid_density is None for r in reports):
        return ClassLabel("inconclusive")
    densities = [float(r.grid_density) for r in reports]

    def series_for(p: float) -> Optional[list[float]]:
        if all(p in r.p_variation for r in reports):
            return [r.p_variation[p] for r in reports]
        return None

    tv = series_for(1.0)
    if tv is not None:
        slope, _ = _fit_loglog(densities, tv)
        if slope <= th.slope_tol:
            return ClassLabel("BV")

    # scan the p-grid for the boundedness crossover
    p_vals = []
    p = th.p_min
    while p <= th.p_max + 1e-9:
        if series_for(round(p, 6)) is not None:
            p_vals.append(round(p, 6))
        p += th.p_step
    prev_p, prev_slope = None, None
    for p in p_vals:
        slope, _ = _fit_loglog(densities, series_for(p))
        if p > 1.0 and slope <= th.slope_tol:
            if prev_slope is not None and prev_slope > slope:
                frac = (prev_slope - th.slope_tol) / (prev_slope - slope)
                fitted = prev_p + frac * (p - prev_p)
            else:
                fitted = p
            return ClassLabel("V_p", round(fitted, 4))
        prev_p, prev_slope = p, slope

    # power modulus of variation: nu(m) ~ m^alpha with alpha < 1
    finest = reports[-1]
    if len(finest.modulus) >= 3:
        ms = list(range(1, len(finest.modulus) + 1))
        alpha, r2 = _fit_loglog(ms, finest.modulus)
        if r2 >= th.r2_min and 0.0 < alpha <= th.alpha_max:
            return ClassLabel("V[n^alpha]", round(alpha, 4))

    harm = [r.harmonic_variation for r in reports]
    slope, r2 = _fit_loglog(densities, harm)
    if slope <= th.slope_tol:
        return ClassLabel("HBV")
    if r2 >= th.r2_min:
        return ClassLabel("W")
    return ClassLabel("inconclusive")


def build_report(
    s,
    grid_density: Optional[int] = None,
    p_grid: Sequence[float] = (1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.5, 3.75, 4.0),
    modulus_n_max: int = 32,
    node_budget: int = 200_000,
) -> VariationReport:
    """Compute the standard functional battery on one sample grid."""
    vals = _values(s)
    harmonic = lambda_variation(vals, LambdaSequence.harmonic(), node_budget=node_budget)
    return VariationReport(
        p_variation={p: p_variation(vals, p) for p in p_grid},
        harmonic_variation=harmonic,
        lambda_variation={"harmonic": harmonic},
        modulus=tuple(modulus_of_variation(vals, min(modulus_n_max, max(1, len(vals) - 1)))),
        grid_density=grid_density,
    )
