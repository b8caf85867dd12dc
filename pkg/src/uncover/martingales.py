"""Martingale decomposition of the visible-edge process.

With ``Ibar_i(t) = 1{T_i <= t} - t`` the edge count splits as

    L(t) = Q(t) + t S(t) + t^2 |E|,
    Q = sum_{ij in E} Ibar_i Ibar_j,   S = sum_i d_i Ibar_i,   Nbar = N(t) - n t,

and ``R = S - dbar * Nbar``. Dividing by ``(1-t)^2`` (for Q) or ``(1-t)``
(for S, Nbar, R) gives martingales on [0, 1), written ``Qt, St, Nt, Rt``.
Between uncovering events each ``Ibar_i`` is affine in t, so the paths are
piecewise polynomials determined by a few integer counters per interval.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .engine import TimeAssignment, run
from .errors import DimensionMismatch, OutOfDomain, TildeAtOne
from .graph import Graph, TriangleCensus

PAIRS = ("QQ", "SS", "NN", "QS", "QN", "SN", "RR", "QR", "RN")


def _check_t(t, tilde: bool):
    ta = np.asarray(t, dtype=np.float64)
    if np.any((ta < 0) | (ta > 1)) or np.any(np.isnan(ta)):
        raise OutOfDomain(f"time outside [0, 1]: {t!r}")
    if tilde and np.any(ta >= 1):
        raise TildeAtOne("rescaled martingales are only defined on [0, 1)")
    return ta


class PiecewisePath:
    """Path given by a polynomial in t on each interval between events.

    ``power`` > 0 marks a rescaled (tilde) path: the polynomial value is
    divided by ``(1 - t)**power`` and evaluation at t = 1 raises.
    """

    def __init__(self, event_times: np.ndarray, piece: Callable, power: int = 0):
        self.event_times = event_times
        self._piece = piece
        self.power = power

    def eval(self, t):
        ta = _check_t(t, self.power > 0)
        idx = np.searchsorted(self.event_times, ta, side="right")
        val = self._piece(idx, ta)
        if self.power:
            val = val / (1.0 - ta) ** self.power
        return val.item() if np.ndim(t) == 0 else val

    __call__ = eval

    def at_events(self) -> np.ndarray:
        return self.eval(self.event_times)


@dataclass(frozen=True)
class MartingalePaths:
    """Centered paths ``Q, S, Nbar, R`` and their rescaled martingales.

    ``vis_edges[j]``, ``vis_deg[j]`` and ``vis_count[j]`` hold the number of
    visible edges, the degree sum of visible vertices and the number of
    visible vertices after ``j`` events (``j = 0`` is before the first).
    """

    event_times: np.ndarray
    vis_edges: np.ndarray
    vis_deg: np.ndarray
    vis_count: np.ndarray
    n: int
    m: int
    mean_deg: float

    def _q(self, idx, t):
        L = self.vis_edges[idx]
        half = self.vis_deg[idx] - 2 * L
        none = self.m - L - half
        return L * (1 - t) ** 2 - half * t * (1 - t) + none * t ** 2

    def _s(self, idx, t):
        return self.vis_deg[idx] - 2.0 * self.m * t

    def _nbar(self, idx, t):
        return self.vis_count[idx] - self.n * t

    def _r(self, idx, t):
        return self._s(idx, t) - self.mean_deg * self._nbar(idx, t)

    @property
    def Q(self):
        return PiecewisePath(self.event_times, self._q)

    @property
    def S(self):
        return PiecewisePath(self.event_times, self._s)

    @property
    def Nbar(self):
        return PiecewisePath(self.event_times, self._nbar)

    @property
    def R(self):
        return PiecewisePath(self.event_times, self._r)

    @property
    def Qt(self):
        return PiecewisePath(self.event_times, self._q, power=2)

    @property
    def St(self):
        return PiecewisePath(self.event_times, self._s, power=1)

    @property
    def Nt(self):
        return PiecewisePath(self.event_times, self._nbar, power=1)

    @property
    def Rt(self):
        return PiecewisePath(self.event_times, self._r, power=1)


def martingale_paths(graph: Graph, assignment: TimeAssignment, realization=None) -> MartingalePaths:
    if assignment.n != graph.n:
        raise DimensionMismatch(f"assignment has {assignment.n} times, graph has {graph.n} vertices")
    real = realization if realization is not None else run(graph, assignment)
    deg_in_order = graph.degrees[assignment.order0]
    vis_deg = np.concatenate([[0], np.cumsum(deg_in_order)])
    return MartingalePaths(
        event_times=assignment.tau,
        vis_edges=np.asarray(real.L_dot, dtype=np.int64),
        vis_deg=vis_deg.astype(np.int64),
        vis_count=np.arange(graph.n + 1, dtype=np.int64),
        n=graph.n,
        m=graph.m,
        mean_deg=2.0 * graph.m / graph.n,
    )


def _ibar(assignment: TimeAssignment, t: float) -> np.ndarray:
    return (assignment.times <= t).astype(np.float64) - t


def centered_values(graph: Graph, assignment: TimeAssignment, t: float) -> dict:
    """``Q, S, Nbar, R`` at ``t`` summed directly from their definitions."""
    t = float(_check_t(t, False))
    ib = _ibar(assignment, t)
    u = graph.edges[:, 0] - 1
    v = graph.edges[:, 1] - 1
    d = graph.degrees.astype(np.float64)
    dbar = 2.0 * graph.m / graph.n
    return {
        "Q": float(np.sum(ib[u] * ib[v])),
        "S": float(np.sum(d * ib)),
        "Nbar": float(np.sum(ib)),
        "R": float(np.sum((d - dbar) * ib)),
    }


def decomposition_residual(graph: Graph, assignment: TimeAssignment, t: float, realization=None) -> float:
    """``L(t) - (Q(t) + t S(t) + t^2 |E|)`` with Q, S summed from definitions
    and L taken from the simulated path."""
    real = realization if realization is not None else run(graph, assignment)
    c = centered_values(graph, assignment, t)
    return real.L.eval(t) - (c["Q"] + t * c["S"] + t * t * graph.m)


def decomposition_residual_r(graph: Graph, assignment: TimeAssignment, t: float, realization=None) -> float:
    """Same identity written with R: ``L = Q + tR + t dbar Nbar + t^2 n dbar / 2``."""
    real = realization if realization is not None else run(graph, assignment)
    c = centered_values(graph, assignment, t)
    dbar = 2.0 * graph.m / graph.n
    return real.L.eval(t) - (c["Q"] + t * c["R"] + t * dbar * c["Nbar"] + t * t * graph.n * dbar / 2)


def quadratic_covariations_batch(graph: Graph, times: np.ndarray, t: float) -> dict:
    """All nine jump-sum (co)variations at ``t`` for each row of ``times``.

    At ``T_i`` the tilde martingales jump by
    ``(1-T_i)^-1 * (sum_{j~i} Icheck_j(T_i), d_i, 1, d_i - dbar)`` for
    ``(Qt, St, Nt, Rt)``, where the neighbour sum uses the state just before
    ``T_i``. Returns arrays of shape ``(reps,)``.
    """
    t = float(_check_t(t, True))
    times = np.atleast_2d(np.asarray(times, dtype=np.float64))
    reps, n = times.shape
    if n != graph.n:
        raise DimensionMismatch(f"times have {n} columns, graph has {graph.n} vertices")
    a = graph.edges[:, 0] - 1
    b = graph.edges[:, 1] - 1
    # later endpoint of each edge; ties go to the larger index (a < b)
    later = np.where(times[:, b] >= times[:, a], b[None, :], a[None, :])
    flat = (later + np.arange(reps)[:, None] * n).ravel()
    earlier_nbrs = np.bincount(flat, minlength=reps * n).reshape(reps, n).astype(np.float64)
    d = graph.degrees.astype(np.float64)
    c = d - 2.0 * graph.m / graph.n
    seen = times <= t
    one_minus = np.where(seen, 1.0 - times, 1.0)
    w = np.where(seen, one_minus ** -2, 0.0)
    inner = (earlier_nbrs - d * times) / one_minus
    return {
        "QQ": np.sum(w * inner ** 2, axis=1),
        "SS": np.sum(w * d ** 2, axis=1),
        "NN": np.sum(w, axis=1),
        "QS": np.sum(w * d * inner, axis=1),
        "QN": np.sum(w * inner, axis=1),
        "SN": np.sum(w * d, axis=1),
        "RR": np.sum(w * c ** 2, axis=1),
        "QR": np.sum(w * c * inner, axis=1),
        "RN": np.sum(w * c, axis=1),
    }


def quadratic_covariations(graph: Graph, assignment: TimeAssignment, t: float) -> dict:
    if assignment.n != graph.n:
        raise DimensionMismatch(f"assignment has {assignment.n} times, graph has {graph.n} vertices")
    out = quadratic_covariations_batch(graph, assignment.times[None, :], t)
    return {k: float(v[0]) for k, v in out.items()}


def _pair(pair: str) -> str:
    key = pair.upper()
    if key not in PAIRS:
        flipped = key[::-1]
        if flipped in PAIRS:
            return flipped
        raise ValueError(f"unknown pair {pair!r}; expected one of {PAIRS}")
    return key


def quadratic_covariation(graph: Graph, assignment: TimeAssignment, pair: str, t: float) -> float:
    return quadratic_covariations(graph, assignment, t)[_pair(pair)]


def expected_qv(graph: Graph, pair: str, t: float) -> float:
    """Closed-form expectation of the (co)variation at ``t``."""
    t = float(_check_t(t, True))
    key = _pair(pair)
    d = graph.degrees.astype(np.float64)
    r = t / (1 - t)
    if key == "QQ":
        return graph.m * r ** 2
    if key == "SS":
        return float(np.sum(d ** 2)) * r
    if key == "NN":
        return graph.n * r
    if key == "SN":
        return 2.0 * graph.m * r
    if key == "RR":
        n = graph.n
        s1 = int(graph.degrees.sum())
        s2 = int(np.sum(graph.degrees.astype(np.int64) ** 2))
        return (s2 - s1 * s1 / n) * r
    return 0.0


def tilde_values_batch(graph: Graph, times: np.ndarray, t: float) -> dict:
    """``Qt, St, Nt, Rt`` at ``t`` for each row of ``times``."""
    t = float(_check_t(t, True))
    times = np.atleast_2d(np.asarray(times, dtype=np.float64))
    ib = (times <= t).astype(np.float64) - t
    u = graph.edges[:, 0] - 1
    v = graph.edges[:, 1] - 1
    d = graph.degrees.astype(np.float64)
    dbar = 2.0 * graph.m / graph.n
    return {
        "Qt": np.sum(ib[:, u] * ib[:, v], axis=1) / (1 - t) ** 2,
        "St": ib @ d / (1 - t),
        "Nt": ib.sum(axis=1) / (1 - t),
        "Rt": ib @ (d - dbar) / (1 - t),
    }


def triangle_decomposition(graph: Graph, assignment: TimeAssignment, census: TriangleCensus, t: float,
                           realization=None):
    """Return ``(T1, T2, T3, residual)`` where
    ``residual = 6 T(t) - (T1 + 3t T2 + 3t^2 T3 + 6t^3 T(1))``.

    ``T1`` sums over triangles, ``T2`` uses the per-edge common-neighbour
    counts and ``T3`` the per-vertex triangle counts of ``census``.
    """
    t = float(_check_t(t, False))
    real = realization
    if real is None or real.T is None:
        real = run(graph, assignment, track_triangles=True)
    ib = _ibar(assignment, t)
    tri = census.triangles - 1
    T1 = 6.0 * float(np.sum(ib[tri[:, 0]] * ib[tri[:, 1]] * ib[tri[:, 2]])) if len(tri) else 0.0
    u = graph.edges[:, 0] - 1
    v = graph.edges[:, 1] - 1
    T2 = 2.0 * float(np.sum(census.delta * ib[u] * ib[v]))
    T3 = float(np.sum(2.0 * census.eps * ib))
    resid = 6.0 * real.T.eval(t) - (T1 + 3 * t * T2 + 3 * t * t * T3 + 6 * t ** 3 * census.t1)
    return T1, T2, T3, resid


def triangle_qv_batch(graph: Graph, census: TriangleCensus, times: np.ndarray, t: float) -> np.ndarray:
    """Jump sum ``[T1t, T1t]_t`` for the rescaled triangle martingale."""
    t = float(_check_t(t, True))
    times = np.atleast_2d(np.asarray(times, dtype=np.float64))
    reps, n = times.shape
    tri = census.triangles - 1
    if len(tri) == 0:
        return np.zeros(reps)
    seen = times <= t
    one_minus = np.where(seen, 1.0 - times, 1.0)
    inner = np.zeros((reps, n))
    for i_col, j_col, k_col in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
        i, j, k = tri[:, i_col], tri[:, j_col], tri[:, k_col]
        ti = times[:, i]
        cj = ((times[:, j] < ti).astype(np.float64) - ti) / one_minus[:, i]
        ck = ((times[:, k] < ti).astype(np.float64) - ti) / one_minus[:, i]
        flat = (i[None, :] + np.arange(reps)[:, None] * n).ravel()
        inner += np.bincount(flat, weights=(2.0 * cj * ck).ravel(), minlength=reps * n).reshape(reps, n)
    w = np.where(seen, one_minus ** -2, 0.0)
    return np.sum(w * (3.0 * inner) ** 2, axis=1)


def expected_triangle_qv(census: TriangleCensus, t: float) -> float:
    t = float(_check_t(t, True))
    return 36.0 * census.t1 * t ** 3 / (1 - t) ** 3
