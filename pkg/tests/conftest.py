"""Shared fixtures: canonical spec texts, analytic series, brute-force oracles.

The brute-force searches below enumerate every chain / interval family
explicitly.  They share the scalar term arithmetic with the library (numpy
column pow, left-to-right accumulation, fsum over descending oscillations)
so that agreement can be asserted bitwise; what they do NOT share is the
search structure, which is the part under test.
"""

import math

import numpy as np

SAWTOOTH_SPEC = (
    "domain [-pi, pi] periodic; "
    "piece (-pi - x)/2 on [-pi, 0); piece (pi - x)/2 on (0, pi]; "
    "jumps {0: pi}"
)
SIGN_SPEC = "domain [-pi, pi] periodic; piece -1 on [-pi, 0); piece 1 on (0, pi]"
SIGN_X_SPEC = "domain [-1, 1]; piece -1 on [-1, 0); piece 1 on (0, 1]"
SIGN_COS_SPEC = (
    "domain [-pi, pi] periodic; "
    "piece -1 on [-pi, -pi/2); piece 1 on (-pi/2, pi/2); piece -1 on (pi/2, pi]"
)


def sign_fourier_series(K):
    """sign(x) on [-pi, pi]: b_k = 4/(pi k) for odd k, zero otherwise."""
    from specjump.coefficients import FourierSeries

    b = tuple(4.0 / (math.pi * k) if k % 2 else 0.0 for k in range(1, K + 1))
    return FourierSeries(K, 0.0, (0.0,) * K, b, provenance="closed_form")


# ---------------------------------------------------------------------------
# Brute-force references for the variation functionals
# ---------------------------------------------------------------------------

def chain_terms(v, p):
    """|v_j - v_i|^p for i < j, via the same numpy column pow the DP uses."""
    a = np.asarray(v, dtype=float)
    n = len(a)
    t = [[0.0] * n for _ in range(n)]
    for j in range(1, n):
        col = np.abs(a[j] - a[:j]) ** p
        for i in range(j):
            t[i][j] = float(col[i])
    return t


def brute_p_variation(v, p):
    t = chain_terms(v, p)
    n = len(v)
    best = 0.0

    def rec(i, acc):
        nonlocal best
        if acc > best:
            best = acc
        for j in range(i + 1, n):
            rec(j, acc + t[i][j])

    for i in range(n):
        rec(i, 0.0)
    return best ** (1.0 / p)


def interval_families(n):
    """Every family of index intervals (a, b), a < b, with disjoint
    interiors; sharing an endpoint is allowed."""

    def rec(start, fam):
        yield fam
        for a in range(start, n):
            for b in range(a + 1, n):
                yield from rec(b, fam + [(a, b)])

    yield from rec(0, [])


def brute_lambda_variation(v, weights):
    best = 0.0
    for fam in interval_families(len(v)):
        osc = sorted((abs(v[b] - v[a]) for a, b in fam), reverse=True)
        val = math.fsum(o * w for o, w in zip(osc, weights))
        if val > best:
            best = val
    return best


def brute_modulus(v, n_max):
    out = [0.0] * n_max
    for fam in interval_families(len(v)):
        if not fam or len(fam) > n_max:
            continue
        acc = 0.0
        for a, b in fam:
            acc = acc + abs(v[b] - v[a])
        for j in range(len(fam) - 1, n_max):
            if acc > out[j]:
                out[j] = acc
    return out
