"""Seeded samplers for the graph and tree models used in the experiments.

All randomness is drawn here with a :class:`numpy.random.Generator`; the
compiled kernels only do the deterministic assembly, so a given
``(spec, seed)`` produces the same graph on either backend.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ConfigRejectionExceeded, InvalidSpec, RejectionBudgetExceeded
from .graph import Graph

KINDS = (
    "labelled_tree",
    "cond_gw",
    "bst",
    "recursive_tree",
    "gnm",
    "gnp",
    "config",
    "path",
    "cycle",
    "complete_bipartite",
)
OFFSPRING = ("poisson1", "binomial2", "geometric")
RANDOM_KINDS = frozenset(KINDS) - {"path", "cycle", "complete_bipartite"}
TREE_KINDS = frozenset({"labelled_tree", "cond_gw", "bst", "recursive_tree", "path"})

_ALIASES = {
    "labeled_tree": "labelled_tree",
    "cayley": "labelled_tree",
    "condgw": "cond_gw",
    "gw": "cond_gw",
    "binary_search_tree": "bst",
    "recursive": "recursive_tree",
    "rrt": "recursive_tree",
    "configmodel": "config",
    "config_model": "config",
    "configuration": "config",
    "completebipartite": "complete_bipartite",
    "bipartite": "complete_bipartite",
}
_OFFSPRING_ALIASES = {
    "poisson": "poisson1",
    "po1": "poisson1",
    "binomial": "binomial2",
    "bin2": "binomial2",
    "geometric1/2": "geometric",
    "geom": "geometric",
}

DEFAULT_CONFIG_ATTEMPTS = 10_000
DEFAULT_GW_ATTEMPTS = 1_000_000


def _norm(name: str) -> str:
    return str(name).strip().lower().replace("-", "_").replace(" ", "_")


@dataclass(frozen=True)
class ModelSpec:
    """Which random (or deterministic) graph to draw.

    ``m`` is used by ``gnm``, ``p`` by ``gnp``, ``offspring`` by ``cond_gw``
    and ``degrees`` by ``config``.
    """

    kind: str
    n: int
    m: Optional[int] = None
    p: Optional[float] = None
    offspring: Optional[str] = None
    degrees: Optional[tuple] = field(default=None, repr=False)
    max_attempts: Optional[int] = None

    def __post_init__(self):
        kind = _norm(self.kind)
        kind = _ALIASES.get(kind, kind)
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise InvalidSpec(f"unknown model kind {self.kind!r}")
        n = self.n
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise InvalidSpec(f"n must be a positive integer, got {n!r}")
        object.__setattr__(self, "n", int(n))
        if kind == "gnm":
            if self.m is None or not 0 <= self.m <= n * (n - 1) // 2:
                raise InvalidSpec(f"gnm needs 0 <= m <= n(n-1)/2, got m={self.m}")
        elif kind == "gnp":
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise InvalidSpec(f"gnp needs 0 <= p <= 1, got p={self.p}")
        elif kind == "cond_gw":
            off = _OFFSPRING_ALIASES.get(_norm(self.offspring or ""), _norm(self.offspring or ""))
            if off not in OFFSPRING:
                raise InvalidSpec(f"cond_gw offspring must be one of {OFFSPRING}, got {self.offspring!r}")
            object.__setattr__(self, "offspring", off)
        elif kind == "config":
            if self.degrees is None:
                raise InvalidSpec("config model needs a degree list")
            deg = tuple(int(d) for d in self.degrees)
            if len(deg) != n:
                raise InvalidSpec(f"degree list has length {len(deg)}, expected n={n}")
            if any(d < 0 or d > n - 1 for d in deg):
                raise InvalidSpec("config degrees must lie in 0..n-1")
            if sum(deg) % 2:
                raise InvalidSpec("config degree sum must be even")
            object.__setattr__(self, "degrees", deg)
        elif kind == "complete_bipartite":
            if n % 2:
                raise InvalidSpec("complete_bipartite needs even n")

    @property
    def is_random(self) -> bool:
        return self.kind in RANDOM_KINDS

    @property
    def is_tree(self) -> bool:
        return self.kind in TREE_KINDS

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "n": self.n}
        for key in ("m", "p", "offspring", "max_attempts"):
            val = getattr(self, key)
            if val is not None:
                out[key] = val
        if self.degrees is not None:
            out["degrees"] = list(self.degrees)
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        data = dict(data)
        if "degrees" in data and data["degrees"] is not None:
            data["degrees"] = tuple(data["degrees"])
        return cls(**data)


def degree_mixture(n: int, a: int, b: int) -> tuple:
    """Half the vertices of degree ``a + b``, half of degree ``a - b``."""
    if n % 2 or not 0 < b <= a:
        raise InvalidSpec("degree_mixture needs even n and 0 < b <= a")
    return (a + b,) * (n // 2) + (a - b,) * (n // 2)


def _offspring_draw(offspring: str, rng: np.random.Generator, size):
    if offspring == "poisson1":
        return rng.poisson(1.0, size=size)
    if offspring == "binomial2":
        return rng.binomial(2, 0.5, size=size)
    # numpy's geometric lives on {1, 2, ...}
    return rng.geometric(0.5, size=size) - 1


def gw_degree_sequence(offspring: str, n: int, rng, max_attempts: int = DEFAULT_GW_ATTEMPTS) -> np.ndarray:
    """Child counts of a conditioned Galton-Watson tree in depth-first order.

    Draws i.i.d. offspring vectors until one sums to ``n - 1``, then rotates
    it (cycle lemma) to the unique cyclic shift whose Lukasiewicz walk stays
    nonnegative until the final step.
    """
    rng = np.random.default_rng(rng)
    off = _OFFSPRING_ALIASES.get(_norm(offspring), _norm(offspring))
    if off not in OFFSPRING:
        raise InvalidSpec(f"offspring must be one of {OFFSPRING}, got {offspring!r}")
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    batch = max(8, int(3 * math.sqrt(n)))
    tried = 0
    while tried < max_attempts:
        rows = min(batch, max_attempts - tried)
        xi = _offspring_draw(off, rng, (rows, n)).astype(np.int64)
        hit = np.flatnonzero(xi.sum(axis=1) == n - 1)
        if hit.size:
            return cycle_lemma_rotate(xi[hit[0]])
        tried += rows
    raise RejectionBudgetExceeded(f"no offspring vector summed to n-1={n - 1} in {max_attempts} draws")


def cycle_lemma_rotate(xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=np.int64)
    walk = np.cumsum(xi - 1)
    if walk[-1] != -1:
        raise InvalidSpec("offspring counts must sum to n - 1")
    first_min = int(np.argmin(walk))
    return np.roll(xi, -(first_min + 1))


def _from0(n, edges0) -> Graph:
    return Graph(n, np.asarray(edges0, dtype=np.int64) + 1)


def _unrank_pairs(idx: np.ndarray) -> np.ndarray:
    # colex order over pairs (u < v): index = v(v-1)/2 + u
    idx = idx.astype(np.int64)
    v = ((1 + np.sqrt(1 + 8 * idx.astype(np.float64))) // 2).astype(np.int64)
    v -= (v * (v - 1) // 2) > idx
    v += ((v + 1) * v // 2) <= idx
    u = idx - v * (v - 1) // 2
    return np.column_stack([u, v])


def _gnm(n: int, m: int, rng: np.random.Generator) -> Graph:
    total = n * (n - 1) // 2
    idx = rng.choice(total, size=m, replace=False) if m else np.zeros(0, dtype=np.int64)
    return _from0(n, _unrank_pairs(np.sort(idx)))


def generate(spec: ModelSpec, rng) -> Graph:
    """Draw one graph with exactly ``spec.n`` vertices from the model."""
    rng = np.random.default_rng(rng)
    n, kind = spec.n, spec.kind
    if kind == "path":
        return Graph(n, [(i, i + 1) for i in range(1, n)])
    if kind == "cycle":
        if n < 3:
            raise InvalidSpec("cycle needs n >= 3")
        return Graph(n, [(i, i + 1) for i in range(1, n)] + [(1, n)])
    if kind == "complete_bipartite":
        h = n // 2
        a, b = np.meshgrid(np.arange(1, h + 1), np.arange(h + 1, n + 1), indexing="ij")
        return Graph(n, np.column_stack([a.ravel(), b.ravel()]))
    if n == 1:
        return Graph(1)
    if kind == "labelled_tree":
        seq = rng.integers(0, n, size=n - 2, dtype=np.int64)
        return _from0(n, _kernels.prufer_decode(seq, n))
    if kind == "recursive_tree":
        j = np.arange(1, n, dtype=np.int64)
        parents = rng.integers(0, j, dtype=np.int64)
        return _from0(n, np.column_stack([parents, j]))
    if kind == "bst":
        keys = rng.permutation(n).astype(np.int64)
        return _from0(n, _kernels.bst_edges(keys))
    if kind == "cond_gw":
        cap = spec.max_attempts or DEFAULT_GW_ATTEMPTS
        outdeg = gw_degree_sequence(spec.offspring, n, rng, max_attempts=cap)
        return _from0(n, _kernels.dfs_tree_edges(outdeg))
    if kind == "gnm":
        return _gnm(n, spec.m, rng)
    if kind == "gnp":
        m = int(rng.binomial(n * (n - 1) // 2, spec.p))
        return _gnm(n, m, rng)
    if kind == "config":
        degrees = np.asarray(spec.degrees, dtype=np.int64)
        stubs = np.repeat(np.arange(n, dtype=np.int64), degrees)
        cap = spec.max_attempts or DEFAULT_CONFIG_ATTEMPTS
        for _ in range(cap):
            ok, edges = _kernels.stub_match(rng.permutation(stubs), degrees)
            if ok:
                return _from0(n, edges)
        raise ConfigRejectionExceeded(f"no simple matching in {cap} attempts")
    raise InvalidSpec(f"unhandled kind {kind!r}")  # pragma: no cover
