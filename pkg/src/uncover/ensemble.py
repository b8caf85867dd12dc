"""Monte Carlo harness: replicate, normalize, estimate moments, compare.

Each replicate ``r`` draws from its own stream ``default_rng([seed, r])``, so
the matrix of normalized values (replicates x grid) and every statistic
derived from it do not depend on how replicates are spread over workers.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import _kernels
from .errors import GridMismatch, SpecInvalid, TooLarge
from .generators import ModelSpec, generate
from .graph import Graph, Regime
from .models import CovarianceModel

PROCESSES = (
    "EdgesDiscrete",
    "EdgesContinuous",
    "ComponentsDiscrete",
    "ComponentsContinuous",
    "TrianglesDiscrete",
    "BipartiteDiscrete",
)
DEFAULT_GRID = tuple(round(0.1 * i, 10) for i in range(1, 10))
JACKKNIFE_BLOCKS = 50


@dataclass(frozen=True)
class ExperimentSpec:
    """One Monte Carlo experiment.

    ``regime`` fixes the edge-count scale: sparse uses ``sqrt(n)``, regular
    ``sqrt(n d)`` in the discrete clock and ``sqrt(n) d`` in the continuous
    one, general uses the given ``beta_n``. Component counts are always
    scaled by ``sqrt(n)`` and bipartite counts by ``n``.
    """

    model_spec: ModelSpec
    replicates: int
    grid: tuple = DEFAULT_GRID
    process: str = "EdgesDiscrete"
    regime: str = "sparse"
    beta_n: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        if self.process not in PROCESSES:
            raise SpecInvalid(f"unknown process {self.process!r}; expected one of {PROCESSES}")
        if int(self.replicates) < 100:
            raise SpecInvalid("replicates must be at least 100")
        object.__setattr__(self, "replicates", int(self.replicates))
        grid = tuple(float(t) for t in self.grid)
        if not grid or any(not 0 < t < 1 for t in grid) or any(b <= a for a, b in zip(grid, grid[1:])):
            raise SpecInvalid("grid must be strictly increasing inside (0, 1)")
        object.__setattr__(self, "grid", grid)
        try:
            regime = Regime.parse(self.regime)
        except ValueError:
            raise SpecInvalid(f"unknown regime {self.regime!r}") from None
        object.__setattr__(self, "regime", regime.value)
        if regime is Regime.GENERAL and self.process.startswith(("Edges", "Triangles")):
            if self.beta_n is None or not self.beta_n > 0:
                raise SpecInvalid("general regime needs beta_n > 0")
        if self.process == "BipartiteDiscrete" and self.model_spec.kind != "complete_bipartite":
            raise SpecInvalid("BipartiteDiscrete requires the complete_bipartite model")
        if not isinstance(self.seed, (int, np.integer)) or self.seed < 0:
            raise SpecInvalid("seed must be a nonnegative integer")

    @property
    def n(self) -> int:
        return self.model_spec.n

    def to_dict(self) -> dict:
        out = {
            "model": self.model_spec.to_dict(),
            "replicates": self.replicates,
            "grid": list(self.grid),
            "process": self.process,
            "regime": self.regime,
            "seed": int(self.seed),
        }
        if self.beta_n is not None:
            out["beta_n"] = float(self.beta_n)
        return out


def _edge_scale(spec: ExperimentSpec, graph: Graph) -> float:
    n = graph.n
    if spec.regime == "sparse":
        return math.sqrt(n)
    if spec.regime == "regular":
        d = graph.degrees
        if np.any(d != d[0]):
            raise SpecInvalid("regular regime needs a regular graph")
        d0 = float(d[0])
        return math.sqrt(n) * d0 if spec.process == "EdgesContinuous" else math.sqrt(n * d0)
    return float(spec.beta_n)


def _discrete_index(n: int, grid: np.ndarray) -> np.ndarray:
    # floor(n t), nudged so that e.g. 2000 * 0.3 is not floored to 599
    return np.floor(n * grid + 1e-9).astype(np.int64)


def normalized_values(spec: ExperimentSpec, graph: Graph, times: np.ndarray) -> np.ndarray:
    """The normalized process of ``spec.process`` on ``spec.grid`` for one run."""
    n = graph.n
    grid = np.asarray(spec.grid)
    order = np.argsort(times, kind="stable").astype(np.int64)
    proc = spec.process
    if proc.endswith("Continuous"):
        idx = np.searchsorted(times[order], grid, side="right")
    else:
        idx = _discrete_index(n, grid)
    if proc.startswith("Edges"):
        ldot = _kernels.edge_counts(graph.indptr, graph.indices, order)
        return (ldot[idx] - grid ** 2 * graph.m) / _edge_scale(spec, graph)
    if proc.startswith("Components"):
        kdot = _kernels.component_counts(graph.indptr, graph.indices, order)
        return (kdot[idx] - grid * (1 - grid) * n) / math.sqrt(n)
    if proc == "TrianglesDiscrete":
        tdot = _kernels.triangle_counts(graph.indptr, graph.indices, order)
        return (tdot[idx] - grid ** 3 * tdot[-1]) / _edge_scale(spec, graph)
    ldot = _kernels.edge_counts(graph.indptr, graph.indices, order)
    return (ldot[idx] - idx.astype(np.float64) ** 2 / 4) / n


def _run_block(spec: ExperimentSpec, start: int, stop: int, fixed: Optional[Graph]) -> np.ndarray:
    out = np.empty((stop - start, len(spec.grid)))
    n = spec.n
    for i, r in enumerate(range(start, stop)):
        rng = np.random.default_rng([int(spec.seed), r])
        graph = fixed if fixed is not None else generate(spec.model_spec, rng)
        out[i] = normalized_values(spec, graph, rng.random(n))
    return out


def simulate_matrix(spec: ExperimentSpec, workers: Optional[int] = None) -> np.ndarray:
    """Normalized values, shape ``(replicates, len(grid))``, row ``r`` from stream ``(seed, r)``."""
    fixed = None if spec.model_spec.is_random else generate(spec.model_spec, 0)
    R = spec.replicates
    workers = (os.cpu_count() or 1) if workers is None else int(workers)
    if workers <= 1:
        return _run_block(spec, 0, R, fixed)
    bounds = np.linspace(0, R, min(R, 4 * workers) + 1).astype(int)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_run_block, itertools.repeat(spec), bounds[:-1], bounds[1:], itertools.repeat(fixed))
        return np.vstack(list(parts))


@dataclass(frozen=True)
class EnsembleStats:
    grid: np.ndarray
    mean: np.ndarray
    cov: np.ndarray
    skew: np.ndarray
    kurt: np.ndarray
    se_cov: np.ndarray
    R: int
    n: int
    seed: int
    frac_negative: np.ndarray
    frac_nonpositive: np.ndarray
    process: str = ""
    samples: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def excess_kurt(self) -> np.ndarray:
        return self.kurt - 3.0

    def to_dict(self) -> dict:
        return {
            "R": int(self.R),
            "n": int(self.n),
            "seed": int(self.seed),
            "process": self.process,
            "grid": self.grid.tolist(),
            "mean": self.mean.tolist(),
            "cov": self.cov.tolist(),
            "se_cov": self.se_cov.tolist(),
            "skew": self.skew.tolist(),
            "kurt": self.kurt.tolist(),
            "frac_negative": self.frac_negative.tolist(),
            "frac_nonpositive": self.frac_nonpositive.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "EnsembleStats":
        arr = {k: np.asarray(data[k], dtype=np.float64) for k in
               ("grid", "mean", "cov", "se_cov", "skew", "kurt", "frac_negative", "frac_nonpositive")}
        return cls(R=int(data["R"]), n=int(data["n"]), seed=int(data["seed"]),
                   process=data.get("process", ""), **arr)

    def cov_csv(self) -> str:
        return matrix_csv(self.grid, self.cov)


def matrix_csv(grid, mat, mean=None) -> str:
    """Rows indexed by ``s``, columns by ``t``; an optional final ``mean`` row."""
    from .engine import fmt

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["s"] + [fmt(t) for t in grid])
    for s, row in zip(grid, mat):
        w.writerow([fmt(s)] + [fmt(x) for x in row])
    if mean is not None:
        w.writerow(["mean"] + [fmt(x) for x in mean])
    return buf.getvalue()


def jackknife_se_cov(x: np.ndarray, blocks: int = JACKKNIFE_BLOCKS) -> np.ndarray:
    """Delete-a-block jackknife standard errors of the covariance entries."""
    R = x.shape[0]
    B = min(blocks, R)
    labels = np.arange(R) * B // R
    sums = np.stack([x[labels == b].sum(axis=0) for b in range(B)])
    outer = np.stack([x[labels == b].T @ x[labels == b] for b in range(B)])
    counts = np.bincount(labels, minlength=B).astype(np.float64)
    tot_s, tot_o = sums.sum(axis=0), outer.sum(axis=0)
    m = R - counts
    mu = (tot_s[None] - sums) / m[:, None]
    second = (tot_o[None] - outer) / m[:, None, None]
    covs = (second - mu[:, :, None] * mu[:, None, :]) * (m / (m - 1))[:, None, None]
    dev = covs - covs.mean(axis=0)
    return np.sqrt((B - 1) / B * (dev ** 2).sum(axis=0))


def summarize(x: np.ndarray, grid, n: int, seed: int, process: str = "", keep_samples: bool = False) -> EnsembleStats:
    x = np.asarray(x, dtype=np.float64)
    R = x.shape[0]
    mean = x.mean(axis=0)
    c = x - mean
    cov = c.T @ c / (R - 1)
    cov = (cov + cov.T) / 2
    m2 = (c ** 2).mean(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        skew = np.where(m2 > 0, (c ** 3).mean(axis=0) / m2 ** 1.5, 0.0)
        kurt = np.where(m2 > 0, (c ** 4).mean(axis=0) / m2 ** 2, 0.0)
    return EnsembleStats(
        grid=np.asarray(grid, dtype=np.float64),
        mean=mean,
        cov=cov,
        skew=skew,
        kurt=kurt,
        se_cov=jackknife_se_cov(x),
        R=R,
        n=int(n),
        seed=int(seed),
        frac_negative=(x < 0).mean(axis=0),
        frac_nonpositive=(x <= 0).mean(axis=0),
        process=process,
        samples=x if keep_samples else None,
    )


def run_ensemble(spec: ExperimentSpec, workers: Optional[int] = None, keep_samples: bool = False) -> EnsembleStats:
    x = simulate_matrix(spec, workers)
    return summarize(x, spec.grid, spec.n, spec.seed, spec.process, keep_samples)


@dataclass(frozen=True)
class ComparisonReport:
    passed: bool
    max_abs_diff: float
    max_z: float
    worst_cell: tuple
    worst_diff: float
    cell_tol: np.ndarray
    mean_drift: np.ndarray
    mean_z: np.ndarray
    mean_ok: bool
    cov_ok: bool

    def to_dict(self) -> dict:
        return {
            "passed": bool(self.passed),
            "cov_ok": bool(self.cov_ok),
            "mean_ok": bool(self.mean_ok),
            "max_abs_diff": float(self.max_abs_diff),
            "max_z": float(self.max_z),
            "worst_cell": [float(self.worst_cell[0]), float(self.worst_cell[1])],
            "worst_diff": float(self.worst_diff),
            "cell_tol": self.cell_tol.tolist(),
            "mean_drift": self.mean_drift.tolist(),
            "mean_z": self.mean_z.tolist(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=1) + "\n"


def compare(stats: EnsembleStats, model, abs_tol: float = 0.02, z_tol: float = 5.0,
            rel_tol: Optional[float] = None) -> ComparisonReport:
    """Cell ``(s, t)`` passes when ``|cov - sigma| <= max(tol, z_tol * se)``;
    ``tol`` is ``abs_tol`` or, with ``rel_tol``, ``rel_tol * sqrt(sigma(s,s) sigma(t,t))``.
    The mean at ``t`` passes when within ``z_tol * sqrt(sigma(t,t) / R)`` of
    the model mean. ``model`` is a :class:`CovarianceModel` or anything with
    ``matrix(grid)`` and ``mean(grid)``."""
    grid = np.asarray(stats.grid)
    model_grid = getattr(model, "grid", None)
    if model_grid is not None and (len(model_grid) != len(grid) or not np.allclose(model_grid, grid, atol=1e-12)):
        raise GridMismatch(f"stats grid {grid.tolist()} differs from model grid {list(model_grid)}")
    sigma = model.matrix(grid)
    if sigma.shape != stats.cov.shape:
        raise GridMismatch("covariance shapes differ")
    diag = np.clip(np.diag(sigma), 0, None)
    if rel_tol is None:
        tol = np.full_like(sigma, abs_tol)
    else:
        tol = rel_tol * np.sqrt(np.outer(diag, diag))
    diff = stats.cov - sigma
    allowed = np.maximum(tol, z_tol * stats.se_cov)
    with np.errstate(invalid="ignore", divide="ignore"):
        z = np.where(stats.se_cov > 0, np.abs(diff) / stats.se_cov, np.where(diff == 0, 0.0, np.inf))
    cov_ok = bool(np.all(np.abs(diff) <= allowed))
    worst = np.unravel_index(int(np.argmax(np.abs(diff) - allowed)), diff.shape)
    drift = stats.mean - np.asarray(model.mean(grid), dtype=np.float64)
    mean_se = np.sqrt(diag / stats.R)
    with np.errstate(invalid="ignore", divide="ignore"):
        mean_z = np.where(mean_se > 0, np.abs(drift) / mean_se, np.where(drift == 0, 0.0, np.inf))
    mean_ok = bool(np.all(np.abs(drift) <= z_tol * mean_se))
    return ComparisonReport(
        passed=cov_ok and mean_ok,
        max_abs_diff=float(np.max(np.abs(diff))),
        max_z=float(np.max(z)),
        worst_cell=(float(grid[worst[0]]), float(grid[worst[1]])),
        worst_diff=float(diff[worst]),
        cell_tol=tol,
        mean_drift=drift,
        mean_z=mean_z,
        mean_ok=mean_ok,
        cov_ok=cov_ok,
    )


def gaussianity_screen(stats: EnsembleStats, skew_tol: float = 0.15, kurt_tol: float = 0.3) -> dict:
    """Flag grid points whose skewness or excess kurtosis look non-Gaussian."""
    bad = (np.abs(stats.skew) > skew_tol) | (np.abs(stats.excess_kurt) > kurt_tol)
    return {
        "gaussian": not bool(bad.any()),
        "flagged": [float(t) for t in np.asarray(stats.grid)[bad]],
        "max_abs_skew": float(np.max(np.abs(stats.skew))),
        "max_abs_excess_kurt": float(np.max(np.abs(stats.excess_kurt))),
    }


def _components_python(graph: Graph, visible: set) -> int:
    seen = set()
    count = 0
    for v in visible:
        if v in seen:
            continue
        count += 1
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in graph.neighbors(u).tolist():
                if w in visible and w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


@dataclass(frozen=True)
class OracleMoments:
    k: int
    edge_mean: Fraction
    edge_var: Fraction
    comp_mean: Fraction
    comp_var: Fraction

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "edges_mean": float(self.edge_mean),
            "edges_variance": float(self.edge_var),
            "components_mean": float(self.comp_mean),
            "components_variance": float(self.comp_var),
        }


def brute_force_oracle(graph: Graph, k: int) -> OracleMoments:
    """Exact moments of the discrete edge and component counts after ``k``
    uncoverings, by enumerating all ``n!`` uncovering orders."""
    n = graph.n
    if n > 8:
        raise TooLarge(f"enumeration needs n <= 8, got {n}")
    if not 0 <= k <= n:
        raise SpecInvalid(f"k must lie in 0..{n}")
    edges = [tuple(e) for e in graph.edges.tolist()]
    cache = {}
    s1 = s2 = c1 = c2 = 0
    total = 0
    for perm in itertools.permutations(range(1, n + 1)):
        visible = frozenset(perm[:k])
        if visible not in cache:
            e = sum(1 for u, v in edges if u in visible and v in visible)
            cache[visible] = (e, _components_python(graph, set(visible)))
        e, c = cache[visible]
        s1 += e
        s2 += e * e
        c1 += c
        c2 += c * c
        total += 1
    em, cm = Fraction(s1, total), Fraction(c1, total)
    return OracleMoments(k, em, Fraction(s2, total) - em ** 2, cm, Fraction(c2, total) - cm ** 2)
