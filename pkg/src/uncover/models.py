"""Closed-form limit covariances, clock transforms and Gaussian grid samplers.

Every Gaussian limit here has covariance ``s^2 * phi(t)`` for ``s <= t`` with
``phi(t) = a (1-t)^2 + b t (1-t)``, plus (for component counts in continuous
time) a Brownian-bridge term. The discrete and continuous clocks differ by
``c^2 s (1-t) f'(s) f'(t)`` where ``f`` is the centering function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import InvalidSpec, NotPSD

# kind -> (clock, required params)
KINDS: dict[str, tuple[str, tuple[str, ...]]] = {
    "DiscreteA": ("discrete", ("dstar", "gammastar")),
    "ContinuousA": ("continuous", ("dstar", "chistar")),
    "DiscreteB": ("discrete", ()),
    "ContinuousB": ("continuous", ("d_inf",)),
    "DiscreteC": ("discrete", ("lambda1", "lambda2")),
    "ContinuousC": ("continuous", ("lambda1", "lambda2", "alpha")),
    "ContinuousC_infinite_alpha": ("continuous", ()),
    "ComponentsDiscrete": ("discrete", ("gammastar",)),
    "ComponentsContinuous": ("continuous", ("gammastar",)),
    "GnmBridge": ("discrete", ()),
    "BipartiteSquare": ("discrete", ()),
}

# named derivatives of centering functions, so transformed models stay serializable
FPRIME: dict[str, Callable[[float], float]] = {
    "t": lambda t: t,
    "2t": lambda t: 2.0 * t,
    "1-2t": lambda t: 1.0 - 2.0 * t,
    "1": lambda t: 1.0,
}

NORMALIZATION = {
    "DiscreteA": "n^-1/2 (Ldot[nt] - t^2 |E|)",
    "ContinuousA": "n^-1/2 (L(t) - t^2 |E|)",
    "DiscreteB": "(n d)^-1/2 (Ldot[nt] - t^2 |E|)",
    "ContinuousB": "(n^1/2 d)^-1 (L(t) - t^2 |E|)",
    "DiscreteC": "beta_n^-1 (Ldot[nt] - t^2 |E|)",
    "ContinuousC": "beta_n^-1 (L(t) - t^2 |E|)",
    "ContinuousC_infinite_alpha": "(n^1/2 dbar)^-1 (L(t) - t^2 |E|)",
    "ComponentsDiscrete": "n^-1/2 (Kdot[nt] - t(1-t) n)",
    "ComponentsContinuous": "n^-1/2 (K(t) - t(1-t) n)",
    "GnmBridge": "m^-1/2 (Ldot[nt] - t^2 m)",
    "BipartiteSquare": "n^-1 (Ldot[nt] - [nt]^2 / 4)",
}


def _ab(kind: str, p: Mapping[str, float]) -> tuple[float, float]:
    """Coefficients of ``s^2 (1-t)^2`` and ``s^2 t (1-t)``."""
    if kind == "DiscreteA":
        return p["dstar"] / 2, p["gammastar"]
    if kind == "ContinuousA":
        return p["dstar"] / 2, p["chistar"]
    if kind == "DiscreteB":
        return 0.5, 0.0
    if kind == "ContinuousB":
        d = p["d_inf"]
        return (0.0 if math.isinf(d) else 1.0 / (2.0 * d)), 1.0
    if kind == "DiscreteC":
        return p["lambda1"] / 2, p["lambda2"]
    if kind == "ContinuousC":
        return p["lambda1"] / 2, p["lambda2"] + p["alpha"] ** 2
    if kind == "ContinuousC_infinite_alpha":
        return 0.0, 1.0
    if kind in ("ComponentsDiscrete", "ComponentsContinuous"):
        return 1.0, p["gammastar"]
    if kind == "GnmBridge":
        # s^2 (1 - t^2) = s^2 (1-t)^2 + 2 s^2 t (1-t)
        return 1.0, 2.0
    raise KeyError(kind)


@dataclass(frozen=True)
class CovarianceModel:
    """A limit covariance ``sigma(s, t)`` plus optional clock corrections.

    ``corrections`` is a tuple of ``(coef, fprime_name)``; each adds
    ``coef * s (1-t) f'(s) f'(t)`` for ``s <= t``. ``clock`` records which
    time scale the model describes after the corrections.
    """

    kind: str
    params: Mapping[str, float] = field(default_factory=dict)
    corrections: tuple = ()
    clock: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidSpec(f"unknown model kind {self.kind!r}")
        base_clock, needed = KINDS[self.kind]
        missing = [k for k in needed if k not in self.params]
        if missing:
            raise InvalidSpec(f"{self.kind} needs parameters {missing}")
        object.__setattr__(self, "params", {k: float(v) for k, v in self.params.items()})
        if not self.clock:
            object.__setattr__(self, "clock", base_clock)
        for coef, name in self.corrections:
            if name not in FPRIME and not callable(name):
                raise InvalidSpec(f"unknown derivative {name!r}; expected one of {sorted(FPRIME)}")

    @property
    def normalization(self) -> str:
        return NORMALIZATION[self.kind]

    def covariance(self, s, t):
        return covariance(self, s, t)

    def matrix(self, grid) -> np.ndarray:
        g = np.asarray(grid, dtype=np.float64)
        return covariance(self, g[:, None], g[None, :])

    def mean(self, t):
        t = np.asarray(t, dtype=np.float64)
        if self.kind == "BipartiteSquare":
            return -t * (1 - t) / 4
        return np.zeros_like(t)

    def to_dict(self) -> dict:
        for _, name in self.corrections:
            if callable(name):
                raise InvalidSpec("models with callable corrections cannot be serialized")
        return {
            "kind": self.kind,
            "params": dict(sorted(self.params.items())),
            "corrections": [[c, name] for c, name in self.corrections],
            "clock": self.clock,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "CovarianceModel":
        return cls(
            kind=data["kind"],
            params=dict(data.get("params", {})),
            corrections=tuple((float(c), name) for c, name in data.get("corrections", [])),
            clock=data.get("clock", ""),
        )


def _fp(name):
    return name if callable(name) else FPRIME[name]


def covariance(model: CovarianceModel, s, t):
    """Evaluate ``Cov(Z(s), Z(t))``; arguments broadcast and are symmetrized."""
    s = np.asarray(s, dtype=np.float64)
    t = np.asarray(t, dtype=np.float64)
    lo = np.minimum(s, t)
    hi = np.maximum(s, t)
    kind = model.kind
    if kind == "BipartiteSquare":
        # Cov(B(s)^2, B(t)^2) = 2 (s(1-t))^2 for a Brownian bridge, scaled by 1/16
        val = lo ** 2 * (1 - hi) ** 2 / 8
    else:
        a, b = _ab(kind, model.params)
        val = a * lo ** 2 * (1 - hi) ** 2 + b * lo ** 2 * hi * (1 - hi)
        if kind == "ComponentsContinuous":
            val = val + lo * (1 - 2 * lo) * (1 - hi) * (1 - 2 * hi)
    for coef, name in model.corrections:
        f = _fp(name)
        fs = np.vectorize(f, otypes=[float])(lo)
        ft = np.vectorize(f, otypes=[float])(hi)
        val = val + coef * lo * (1 - hi) * fs * ft
    if val.ndim == 0:
        return float(val)
    return val


def derandomize(model: CovarianceModel, c: float, fprime="t") -> CovarianceModel:
    """Continuous-clock limit -> discrete-clock limit.

    Subtracts ``c^2 s (1-t) f'(s) f'(t)``. ``fprime`` is a name from
    :data:`FPRIME` or a callable.
    """
    if model.clock != "continuous":
        raise InvalidSpec(f"derandomize expects a continuous-clock model, got {model.clock}")
    if c < 0:
        raise InvalidSpec("c must be nonnegative")
    if c == 0:
        return CovarianceModel(model.kind, model.params, model.corrections, "discrete")
    return CovarianceModel(model.kind, model.params, model.corrections + ((-c * c, fprime),), "discrete")


def randomize(model: CovarianceModel, c: float, fprime="t") -> CovarianceModel:
    """Discrete-clock limit -> continuous-clock limit (adds the bridge term)."""
    if model.clock != "discrete":
        raise InvalidSpec(f"randomize expects a discrete-clock model, got {model.clock}")
    if c < 0:
        raise InvalidSpec("c must be nonnegative")
    if c == 0:
        return CovarianceModel(model.kind, model.params, model.corrections, "continuous")
    return CovarianceModel(model.kind, model.params, model.corrections + ((c * c, fprime),), "continuous")


def _sqrt_factor(cov: np.ndarray) -> np.ndarray:
    cov = (cov + cov.T) / 2
    vals, vecs = np.linalg.eigh(cov)
    scale = max(float(np.trace(cov)), 1e-300)
    if vals.size and vals.min() < -1e-10 * scale:
        raise NotPSD(f"covariance has eigenvalue {vals.min():.3e} (trace {scale:.3e})")
    return vecs * np.sqrt(np.clip(vals, 0.0, None))


def _check_grid(grid) -> np.ndarray:
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 1 or g.size == 0 or np.any(np.diff(g) <= 0) or g[0] < 0 or g[-1] > 1:
        raise InvalidSpec("grid must be a strictly increasing sequence in [0, 1]")
    return g


def gaussian_sample(model: CovarianceModel, grid, rng, size: int | None = None) -> np.ndarray:
    """Draw the limit process on ``grid``.

    Returns shape ``(len(grid),)`` or ``(size, len(grid))``. For the bipartite
    kind the draw is ``-B(t)^2 / 4`` with ``B`` a Brownian bridge.
    """
    rng = np.random.default_rng(rng)
    g = _check_grid(grid)
    reps = 1 if size is None else int(size)
    if model.kind == "BipartiteSquare":
        bridge = g[:, None] * 0 + np.minimum(g[:, None], g[None, :]) * (1 - np.maximum(g[:, None], g[None, :]))
        root = _sqrt_factor(bridge)
        b = rng.standard_normal((reps, g.size)) @ root.T
        out = -0.25 * b ** 2
    else:
        root = _sqrt_factor(model.matrix(g))
        out = rng.standard_normal((reps, g.size)) @ root.T
    # zero-variance points (e.g. t = 0 or 1) come out exactly 0
    return out[0] if size is None else out


def brownian_representation_sample(a: float, b: float, grid, rng, size: int = 1) -> np.ndarray:
    """Sample ``phi(t) W(t^2 / phi(t))`` with ``phi(t) = a(1-t)^2 + b t(1-t)``
    from a simulated Wiener process; ``grid`` must lie in (0, 1)."""
    rng = np.random.default_rng(rng)
    g = _check_grid(grid)
    if g[0] <= 0 or g[-1] >= 1:
        raise InvalidSpec("representation grid must lie strictly inside (0, 1)")
    phi = a * (1 - g) ** 2 + b * g * (1 - g)
    clock = g ** 2 / phi
    order = np.argsort(clock, kind="stable")
    ct = clock[order]
    steps = np.diff(np.concatenate([[0.0], ct]))
    incr = rng.standard_normal((int(size), g.size)) * np.sqrt(steps)
    w_sorted = np.cumsum(incr, axis=1)
    w = np.empty_like(w_sorted)
    w[:, order] = w_sorted
    return phi * w


def model_for(kind: str, **params) -> CovarianceModel:
    return CovarianceModel(kind, params)


def model_from_limit_params(lp, clock: str = "discrete") -> CovarianceModel:
    """Edge-count model matching a :class:`~uncover.graph.LimitParams`."""
    regime = getattr(lp.regime, "value", lp.regime)
    if regime == "sparse":
        if clock == "discrete":
            return CovarianceModel("DiscreteA", {"dstar": lp.dstar, "gammastar": lp.gammastar})
        return CovarianceModel("ContinuousA", {"dstar": lp.dstar, "chistar": lp.chistar})
    if regime == "regular":
        if clock == "discrete":
            return CovarianceModel("DiscreteB")
        return CovarianceModel("ContinuousB", {"d_inf": lp.d_inf})
    if clock == "discrete":
        return CovarianceModel("DiscreteC", {"lambda1": lp.lambda1, "lambda2": lp.lambda2})
    return CovarianceModel("ContinuousC", {"lambda1": lp.lambda1, "lambda2": lp.lambda2, "alpha": lp.alpha})


@dataclass(frozen=True)
class TabulatedModel:
    """Covariance (and mean) known only on a grid, e.g. read back from CSV."""

    grid: np.ndarray
    cov: np.ndarray
    mean_values: np.ndarray

    def matrix(self, grid) -> np.ndarray:
        return self.cov.copy()

    def mean(self, grid) -> np.ndarray:
        return self.mean_values.copy()


def model_table_csv(model, grid) -> str:
    """Covariance CSV (rows ``s``, columns ``t``) followed by a ``mean`` row."""
    from .ensemble import matrix_csv

    g = _check_grid(grid)
    return matrix_csv(g, model.matrix(g), model.mean(g))


def parse_model_csv(text: str) -> TabulatedModel:
    import csv

    rows = [r for r in csv.reader(text.splitlines()) if r]
    if not rows or rows[0][0] != "s":
        raise InvalidSpec("theory CSV must start with a header row 's,t1,t2,...'")
    grid = np.array([float(x) for x in rows[0][1:]])
    body = [r for r in rows[1:] if r[0] != "mean"]
    mean_rows = [r for r in rows[1:] if r[0] == "mean"]
    cov = np.array([[float(x) for x in r[1:]] for r in body])
    if cov.shape != (grid.size, grid.size):
        raise InvalidSpec(f"theory CSV covariance has shape {cov.shape}, expected {(grid.size, grid.size)}")
    mean = np.array([float(x) for x in mean_rows[0][1:]]) if mean_rows else np.zeros(grid.size)
    return TabulatedModel(grid, cov, mean)
