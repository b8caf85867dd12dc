"""Graphs, degree statistics, limit-regime parameters and small-subgraph counts.

Vertices are labelled ``1..n`` in the public API. Internally adjacency is held
in 0-based CSR form (``indptr``, ``indices``) for the compiled kernels.
"""
from __future__ import annotations

import enum
import io
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
import scipy.sparse as sp

from . import _kernels
from .errors import BadScale, DimensionMismatch, GraphError, NotRegular


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class Graph:
    """Immutable simple undirected graph on vertices ``1..n``.

    Edges are stored canonically (``u < v``) and sorted lexicographically, so
    two graphs with the same edge set compare and serialize identically.
    """

    __slots__ = ("_n", "_edges", "_indptr", "_indices", "_degrees")

    def __init__(self, n: int, edges=()):
        n = int(n)
        if n < 1:
            raise GraphError("graph needs at least one vertex")
        e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 1 or e.max() > n):
            raise GraphError(f"vertex labels must lie in 1..{n}")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        if np.any(lo == hi):
            v = int(lo[lo == hi][0])
            raise GraphError(f"self-loop at vertex {v}")
        keys = (lo - 1) * n + (hi - 1)
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        if keys.size > 1 and np.any(keys[1:] == keys[:-1]):
            i = int(np.flatnonzero(keys[1:] == keys[:-1])[0])
            u, v = divmod(int(keys[i]), n)
            raise GraphError(f"duplicate edge {u + 1} {v + 1}")
        self._n = n
        self._edges = _readonly(np.column_stack([lo[order], hi[order]]))
        u0 = self._edges[:, 0] - 1
        v0 = self._edges[:, 1] - 1
        src = np.concatenate([u0, v0])
        dst = np.concatenate([v0, u0])
        perm = np.lexsort((dst, src))
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        self._indptr = _readonly(indptr)
        self._indices = _readonly(dst[perm].astype(np.int64))
        self._degrees = _readonly(counts.astype(np.int64))

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> np.ndarray:
        """(m, 2) array of 1-based edges with ``u < v``."""
        return self._edges

    @property
    def degrees(self) -> np.ndarray:
        """``degrees[i - 1]`` is the degree of vertex ``i``."""
        return self._degrees

    @property
    def indptr(self) -> np.ndarray:
        return self._indptr

    @property
    def indices(self) -> np.ndarray:
        return self._indices

    def neighbors(self, v: int) -> np.ndarray:
        return self._indices[self._indptr[v - 1]:self._indptr[v]] + 1

    def has_edge(self, u: int, v: int) -> bool:
        nb = self._indices[self._indptr[u - 1]:self._indptr[u]]
        i = np.searchsorted(nb, v - 1)
        return bool(i < nb.size and nb[i] == v - 1)

    def n_components(self) -> int:
        order = np.arange(self._n, dtype=np.int64)
        return int(_kernels.component_counts(self._indptr, self._indices, order)[-1])

    def is_forest(self) -> bool:
        return self.m == self._n - self.n_components()

    def adjacency(self) -> sp.csr_matrix:
        data = np.ones(self._indices.size, dtype=np.int64)
        return sp.csr_matrix((data, self._indices, self._indptr), shape=(self._n, self._n))

    def to_text(self) -> str:
        buf = io.StringIO()
        buf.write(f"{self._n} {self.m}\n")
        for u, v in self._edges.tolist():
            buf.write(f"{u} {v}\n")
        return buf.getvalue()

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and np.array_equal(self._edges, other._edges)

    def __hash__(self):
        return hash((self._n, self._edges.tobytes()))

    def __repr__(self):
        return f"Graph(n={self._n}, m={self.m})"


def parse_edgelist(text: str) -> Graph:
    """Parse the ``n m`` header + ``u v`` lines format."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise GraphError("empty edge list")
    try:
        n, m = (int(x) for x in lines[0])
        rows = [(int(a), int(b)) for a, b in lines[1:]]
    except ValueError as exc:
        raise GraphError(f"malformed edge list: {exc}") from None
    if len(rows) != m:
        raise GraphError(f"header declares {m} edges, found {len(rows)}")
    return Graph(n, rows)


def read_edgelist(path: str | os.PathLike) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_edgelist(fh.read())


def write_edgelist(graph: Graph, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(graph.to_text())


@dataclass(frozen=True)
class DegreeStats:
    degrees: np.ndarray
    mean_deg: float
    second_moment: float
    variance: float
    max_deg: int
    centered_sq_sum: float
    centered_fourth_sum: float
    cube_sum: int
    fourth_sum: int

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def sum_deg(self) -> int:
        return int(self.degrees.sum())

    @property
    def sq_sum(self) -> int:
        return int((self.degrees ** 2).sum())


def degree_stats(graph: Graph) -> DegreeStats:
    """Degree moments of ``graph``, computed in exact integer/rational arithmetic."""
    d = graph.degrees
    n = graph.n
    s1 = int(d.sum())
    s2 = int((d ** 2).sum())
    s3 = int((d ** 3).sum())
    s4 = int((d ** 4).sum())
    mu = Fraction(s1, n)
    c2 = s2 - 2 * mu * s1 + n * mu ** 2
    c4 = s4 - 4 * mu * s3 + 6 * mu ** 2 * s2 - 4 * mu ** 3 * s1 + n * mu ** 4
    return DegreeStats(
        degrees=d,
        mean_deg=float(mu),
        second_moment=s2 / n,
        variance=float(c2 / n),
        max_deg=int(d.max()) if n else 0,
        centered_sq_sum=float(c2),
        centered_fourth_sum=float(c4),
        cube_sum=s3,
        fourth_sum=s4,
    )


class Regime(str, enum.Enum):
    SPARSE = "sparse"
    REGULAR = "regular"
    GENERAL = "general"

    @classmethod
    def parse(cls, value) -> "Regime":
        if isinstance(value, Regime):
            return value
        return cls(str(value).strip().lower())


@dataclass(frozen=True)
class LimitParams:
    """Finite-n plug-ins for the parameters of the limiting covariance.

    ``lambda1 = n*dbar/beta^2``, ``lambda2 = sum (d_i - dbar)^2 / beta^2`` and
    ``alpha = sqrt(n)*dbar/beta``. ``dstar/chistar/gammastar`` are filled in
    the sparse regime, ``d_inf`` in the regular one.
    """

    regime: Regime
    beta_n: float
    lambda1: float
    lambda2: float
    alpha: float
    dstar: Optional[float] = None
    chistar: Optional[float] = None
    gammastar: Optional[float] = None
    d_inf: Optional[float] = None


def limit_params(stats: DegreeStats, n: int, regime, beta_n: float | None = None) -> LimitParams:
    regime = Regime.parse(regime)
    if n != stats.n:
        raise DimensionMismatch(f"n={n} but stats describe {stats.n} vertices")
    extra = {}
    if regime is Regime.SPARSE:
        beta = math.sqrt(n)
        extra = dict(dstar=stats.mean_deg, chistar=stats.second_moment, gammastar=stats.variance)
    elif regime is Regime.REGULAR:
        d = stats.degrees
        if d.size and np.any(d != d[0]):
            raise NotRegular("degrees differ; regular regime needs a regular graph")
        dd = float(d[0])
        beta = math.sqrt(n * dd)
        extra = dict(d_inf=dd)
    else:
        if beta_n is None:
            raise BadScale("general regime requires an explicit beta_n")
        beta = float(beta_n)
    if not beta > 0:
        raise BadScale(f"beta_n must be positive, got {beta}")
    return LimitParams(
        regime=regime,
        beta_n=beta,
        lambda1=n * stats.mean_deg / beta ** 2,
        lambda2=stats.centered_sq_sum / beta ** 2,
        alpha=math.sqrt(n) * stats.mean_deg / beta,
        **extra,
    )


@dataclass(frozen=True)
class TriangleCensus:
    t1: int
    eps: np.ndarray
    delta: np.ndarray
    triangles: np.ndarray

    def delta_of(self, graph: Graph, u: int, v: int) -> int:
        lo, hi = min(u, v), max(u, v)
        keys = (graph.edges[:, 0] - 1) * graph.n + graph.edges[:, 1] - 1
        i = np.searchsorted(keys, (lo - 1) * graph.n + hi - 1)
        if i >= keys.size or keys[i] != (lo - 1) * graph.n + hi - 1:
            raise KeyError((u, v))
        return int(self.delta[i])


def triangle_census(graph: Graph) -> TriangleCensus:
    """Triangle counts: total, per vertex (``eps``) and per edge (``delta``,
    aligned with ``graph.edges``)."""
    if graph.m == 0:
        z = np.zeros(graph.n, dtype=np.int64)
        return TriangleCensus(0, _readonly(z), _readonly(np.zeros(0, dtype=np.int64)),
                              _readonly(np.zeros((0, 3), dtype=np.int64)))
    a = graph.adjacency()
    a2 = a @ a
    u0 = graph.edges[:, 0] - 1
    v0 = graph.edges[:, 1] - 1
    delta = np.asarray(a2[u0, v0]).ravel().astype(np.int64)
    per_vertex = np.zeros(graph.n, dtype=np.int64)
    np.add.at(per_vertex, u0, delta)
    np.add.at(per_vertex, v0, delta)
    eps = per_vertex // 2
    t1 = int(delta.sum()) // 3
    tri = _kernels.list_triangles(graph.indptr, graph.indices) + 1
    return TriangleCensus(t1, _readonly(eps), _readonly(delta), _readonly(np.asarray(tri)))


HOM_PATTERNS = ("C4", "P4", "K13", "K14")


def hom_count(pattern: str, graph: Graph) -> int:
    """Number of homomorphisms (not injective copies) from a small pattern.

    C4 is ``trace(A^4)`` via the sparse square of the adjacency matrix, so the
    cost is that of ``A @ A`` (fine up to a few thousand vertices). P4 counts
    3-step walks, ``1' A^3 1``. The stars are closed forms in the degrees.
    """
    key = pattern.upper().replace("_", "").replace(",", "")
    d = graph.degrees.astype(object)
    if key == "K13":
        return int(sum(x ** 3 for x in d))
    if key == "K14":
        return int(sum(x ** 4 for x in d))
    a = graph.adjacency()
    if key == "C4":
        a2 = (a @ a).tocsr()
        return int(np.sum(a2.data.astype(np.int64) ** 2))
    if key == "P4":
        deg = graph.degrees.astype(np.int64)
        return int(deg @ (a @ deg))
    raise ValueError(f"unknown pattern {pattern!r}; expected one of {HOM_PATTERNS}")
