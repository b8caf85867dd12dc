"""Independent exact oracles. Nothing here imports the package under test.

Edge-count covariances come from counting ordered edge pairs by how many
vertices they share: with ``A_k`` the first ``k`` uncovered vertices,

    Cov(Ldot_j, Ldot_k) = sum_c N_c [P(e in A_j, f in A_k | overlap c) - P(e in A_j) P(f in A_k)]

where ``N_2 = m``, ``N_1 = sum d(d-1)`` and ``N_0 = m^2 - N_1 - N_2``. The
probabilities are ratios of falling factorials, so the result is exact for
any ``n``; letting ``n`` grow gives the limit covariance independently of the
closed forms implemented in the package.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def falling(x, r):
    out = 1
    for i in range(r):
        out *= x - i
    return out


def _p_nested(n, j, k, a, b):
    # P(a fixed vertices among first j and b other fixed vertices among first k)
    return Fraction(falling(j, a) * falling(k - a, b), falling(n, a + b))


def edge_cov_discrete(n: int, m: int, wedge_sum: int, j: int, k: int) -> Fraction:
    """Exact Cov(Ldot_j, Ldot_k) for j <= k on any graph with ``n`` vertices,
    ``m`` edges and ``sum d_i (d_i - 1) = wedge_sum``."""
    j, k = min(j, k), max(j, k)
    n2, n1 = m, wedge_sum
    n0 = m * m - n1 - n2
    pj = _p_nested(n, j, j, 2, 0)
    pk = _p_nested(n, k, k, 2, 0)
    base = pj * pk
    return (n2 * (_p_nested(n, j, k, 2, 0) - base)
            + n1 * (_p_nested(n, j, k, 2, 1) - base)
            + n0 * (_p_nested(n, j, k, 2, 2) - base))


def edge_cov_continuous(n: int, m: int, wedge_sum: int, s, t) -> Fraction:
    s, t = Fraction(min(s, t)), Fraction(max(s, t))
    # overlap 2: s^2 - s^2 t^2; overlap 1: s^2 t - s^2 t^2; disjoint: 0
    return m * (s * s - s * s * t * t) + wedge_sum * (s * s * t - s * s * t * t)


def component_cov_continuous_forest(n: int, m: int, wedge_sum: int, s, t) -> Fraction:
    """Cov(K(s), K(t)) for a forest, using K = N - L."""
    s, t = Fraction(min(s, t)), Fraction(max(s, t))
    nn = n * s * (1 - t)
    nl = 2 * m * s * t * (1 - t)        # Cov(N(s), L(t))
    ln = 2 * m * s * s * (1 - t)        # Cov(L(s), N(t))
    return nn - nl - ln + edge_cov_continuous(n, m, wedge_sum, s, t)


def labelled_tree_profile(n: int):
    """(m, wedge_sum) with the limiting degree law 1 + Poisson(1): chi = 5, dbar = 2."""
    return n - 1, 3 * n


def brute_edge_moments(n: int, edges, k: int):
    """Mean/variance of Ldot_k over all k-subsets (each equally likely)."""
    vals = []
    for sub in itertools.combinations(range(1, n + 1), k):
        s = set(sub)
        vals.append(sum(1 for u, v in edges if u in s and v in s))
    tot = len(vals)
    mean = Fraction(sum(vals), tot)
    return mean, Fraction(sum(v * v for v in vals), tot) - mean ** 2


def brute_edge_cov(n: int, edges, j: int, k: int) -> Fraction:
    """Exact Cov(Ldot_j, Ldot_k) by enumerating all n! orders."""
    sj = sk = sjk = 0
    cnt = 0
    for perm in itertools.permutations(range(1, n + 1)):
        a, b = set(perm[:j]), set(perm[:k])
        lj = sum(1 for u, v in edges if u in a and v in a)
        lk = sum(1 for u, v in edges if u in b and v in b)
        sj += lj
        sk += lk
        sjk += lj * lk
        cnt += 1
    return Fraction(sjk, cnt) - Fraction(sj, cnt) * Fraction(sk, cnt)


def hom_c4_eig(n: int, edges) -> int:
    a = np.zeros((n, n))
    for u, v in edges:
        a[u - 1, v - 1] = a[v - 1, u - 1] = 1
    lam = np.linalg.eigvalsh(a)
    return int(round(float(np.sum(lam ** 4))))


def cond_poisson_shape_masses():
    """Conditioned Poisson(1) child counts for n = 3, split by shape class."""
    pmf = lambda x: Fraction(1, math.factorial(x))  # e^{-1} cancels
    masses = {}
    for xi in itertools.product(range(3), repeat=3):
        if sum(xi) != 2:
            continue
        w = pmf(xi[0]) * pmf(xi[1]) * pmf(xi[2])
        key = tuple(sorted(xi, reverse=True))
        masses[key] = masses.get(key, 0) + w
    tot = sum(masses.values())
    return {k: v / tot for k, v in masses.items()}
