"""Exact simulation of one uncovering run in both clocks.

Vertices are uncovered in increasing order of i.i.d. uniform times. The
discrete-time arrays (indexed by the number ``k`` of uncovered vertices) are
filled first; the continuous-time step paths are the same arrays placed at the
ordered times, so ``L(tau_k) == Ldot[k]`` holds by construction.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, OutOfDomain
from .graph import Graph


@dataclass(frozen=True)
class TimeAssignment:
    """Uncovering times ``times[i - 1]`` of vertex ``i``.

    ``order`` lists the vertices (1-based) by increasing time, ties broken by
    vertex index; ``tau[k - 1]`` is the time of the k-th uncovering.
    """

    times: np.ndarray
    order: np.ndarray
    tau: np.ndarray

    @property
    def n(self) -> int:
        return len(self.times)

    @property
    def order0(self) -> np.ndarray:
        return self.order - 1

    @classmethod
    def from_times(cls, times) -> "TimeAssignment":
        times = np.array(times, dtype=np.float64)
        if times.ndim != 1 or times.size == 0:
            raise DimensionMismatch("times must be a non-empty 1-d array")
        if np.any((times < 0) | (times > 1)):
            raise OutOfDomain("uncovering times must lie in [0, 1]")
        order = np.argsort(times, kind="stable")
        times.setflags(write=False)
        tau = times[order]
        return cls(times=times, order=(order + 1).astype(np.int64), tau=tau)


def sample_uncover_times(n: int, rng) -> TimeAssignment:
    rng = np.random.default_rng(rng)
    return TimeAssignment.from_times(rng.random(n))


@dataclass(frozen=True)
class StepPath:
    """Right-continuous step function on [0, 1]."""

    event_times: np.ndarray
    values: np.ndarray
    initial: float = 0

    def eval(self, t):
        return evaluate(self, t)

    __call__ = eval


def evaluate(path: StepPath, t):
    """Value of ``path`` at ``t`` (scalar or array): the value after the last
    event ``<= t``, or ``initial`` before the first event."""
    ta = np.asarray(t, dtype=np.float64)
    if np.any((ta < 0) | (ta > 1)) or np.any(np.isnan(ta)):
        raise OutOfDomain(f"time outside [0, 1]: {t!r}")
    idx = np.searchsorted(path.event_times, ta, side="right") - 1
    vals = np.where(idx >= 0, path.values[np.maximum(idx, 0)], path.initial)
    if np.ndim(t) == 0:
        return vals.item()
    return vals


@dataclass(frozen=True)
class Realization:
    graph: Graph
    assignment: TimeAssignment
    L: StepPath
    N: StepPath
    K: StepPath
    T: Optional[StepPath]
    L_dot: np.ndarray
    K_dot: np.ndarray
    T_dot: Optional[np.ndarray]


def run(graph: Graph, assignment: TimeAssignment, track_triangles: bool = False) -> Realization:
    """Uncover ``graph`` in the order given by ``assignment``."""
    if assignment.n != graph.n:
        raise DimensionMismatch(f"assignment has {assignment.n} times, graph has {graph.n} vertices")
    order = assignment.order0
    L_dot = _kernels.edge_counts(graph.indptr, graph.indices, order)
    K_dot = _kernels.component_counts(graph.indptr, graph.indices, order)
    T_dot = _kernels.triangle_counts(graph.indptr, graph.indices, order) if track_triangles else None
    tau = assignment.tau
    ks = np.arange(1, graph.n + 1, dtype=np.int64)
    for a in (L_dot, K_dot, T_dot):
        if a is not None:
            a.setflags(write=False)
    return Realization(
        graph=graph,
        assignment=assignment,
        L=StepPath(tau, L_dot[1:], 0),
        N=StepPath(tau, ks, 0),
        K=StepPath(tau, K_dot[1:], 0),
        T=StepPath(tau, T_dot[1:], 0) if T_dot is not None else None,
        L_dot=L_dot,
        K_dot=K_dot,
        T_dot=T_dot,
    )


def discrete_edge_samples(graph: Graph, reps: int, rng) -> np.ndarray:
    """``reps`` independent discrete-time edge paths, shape ``(reps, n + 1)``."""
    rng = np.random.default_rng(rng)
    orders = np.argsort(rng.random((reps, graph.n)), axis=1, kind="stable").astype(np.int64)
    eu = graph.edges[:, 0] - 1
    ev = graph.edges[:, 1] - 1
    return _kernels.edge_counts_batch(eu, ev, orders)


def fmt(x) -> str:
    """Floats with 17 significant digits, integers verbatim."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if x is None or (isinstance(x, float) and np.isnan(x)):
        return ""
    return format(float(x), ".17g")


REALIZATION_COLUMNS = ("event_time", "L", "N", "K", "T")


def realization_rows(real: Realization):
    """Yield one row per event, preceded by the state at time 0."""
    tau = real.assignment.tau
    T_dot = real.T_dot
    yield (0.0, 0, 0, 0, 0 if T_dot is not None else None)
    for k in range(1, real.graph.n + 1):
        yield (
            float(tau[k - 1]),
            int(real.L_dot[k]),
            k,
            int(real.K_dot[k]),
            int(T_dot[k]) if T_dot is not None else None,
        )


def realization_csv(real: Realization, extra: dict | None = None) -> str:
    """CSV text with columns ``event_time,L,N,K,T`` plus any ``extra``
    columns (name -> sequence aligned with the rows, time-0 row included)."""
    extra = extra or {}
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(list(REALIZATION_COLUMNS) + list(extra))
    for i, row in enumerate(realization_rows(real)):
        w.writerow([fmt(x) for x in row] + [fmt(extra[c][i]) for c in extra])
    return buf.getvalue()
