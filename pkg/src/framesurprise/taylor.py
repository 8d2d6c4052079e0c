"""Backward-difference stencils, the polynomial predictor, and residual scores.

The predictor extrapolates frame t's feature vector from its N+1
predecessors: derivative n is estimated by the n-th backward finite
difference (weights ``(-1)^k * C(n, k)`` over lags k = 0..n), and the
estimates are combined with 1/n! weights at unit frame spacing,

    predicted f_t = sum_{n=0..N} (1/n!) * diff_n(f_{t-1}, ..., f_{t-1-n}).

The per-frame surprise score is the L2 norm of the prediction error.  Note
the factorial-weighted difference form is kept verbatim: it is exact for
constant and linear trajectories but intentionally NOT for higher-degree
polynomials (a quadratic leaves a constant residual of 1), which the test
suite pins as a regression fixture.

Frames too early to support the full order use the adaptive effective
order ``n_t = min(N, t-1)``; frame 0 has no prediction context and scores
0 by convention.

All arithmetic runs in float64.  Binomials and factorials come from exact
integer recurrences, never gamma calls, so stencils stay integer-exact up
to order 12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Union

import numpy as np

from .errors import (
    EmptyInputError,
    InvalidConfigError,
    ShapeError,
    UnsupportedOrderError,
)
from .trajectory import FeatureSequence, PoolConfig, RegionSequence

__all__ = [
    "MAX_ORDER",
    "TaylorConfig",
    "StencilTable",
    "ResidualSeries",
    "SurpriseParams",
    "fd_coefficients",
    "collapsed_weights",
    "taylor_predict",
    "residual_series",
    "residual_series_oracle",
    "surprise",
]

# Above order 12 the binomial*sample products leave the 53-bit integer
# range and the exactness guarantees below stop holding.
MAX_ORDER = 12


@dataclass(frozen=True)
class TaylorConfig:
    """Expansion order N and frame spacing (fixed to 1 in this library)."""

    order: int = 3
    step: float = 1.0

    def __post_init__(self):
        if self.order < 0:
            raise InvalidConfigError(f"order must be >= 0, got {self.order}")
        if self.order > MAX_ORDER:
            raise UnsupportedOrderError(
                f"order {self.order} exceeds the supported maximum {MAX_ORDER}"
            )
        if self.step != 1.0:
            raise InvalidConfigError("frame spacing other than 1 is not supported")


@dataclass(frozen=True)
class StencilTable:
    """Backward-difference weights for one derivative order:
    ``weights[k] = (-1)^k * C(order, k)`` applied to lag k."""

    order: int
    weights: np.ndarray


@dataclass
class ResidualSeries:
    """Per-frame surprise scores plus the metadata that produced them.

    ``values[t]`` is the L2 prediction error at frame t (0 at t=0);
    ``order_used[t]`` is the effective expansion order at t (-1 at t=0,
    meaning no prediction was possible).  ``pool`` is the PoolConfig the
    features went through, or None when they arrived pre-pooled.
    """

    values: np.ndarray
    order_used: np.ndarray
    config: TaylorConfig
    pool: Optional[PoolConfig] = None

    @property
    def frames(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SurpriseParams:
    """Innovation scale of the isotropic Gaussian surprise model."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise InvalidConfigError(f"sigma must be positive, got {self.sigma}")


@lru_cache(maxsize=None)
def _binomial_row(n: int) -> tuple[int, ...]:
    """Row n of Pascal's triangle by exact integer recurrence."""
    row = [1]
    for k in range(n):
        row.append(row[k] * (n - k) // (k + 1))
    return tuple(row)


def fd_coefficients(order: int) -> StencilTable:
    """Weights of the order-n backward difference over lags 0..n."""
    if order < 0:
        raise InvalidConfigError(f"order must be >= 0, got {order}")
    if order > MAX_ORDER:
        raise UnsupportedOrderError(
            f"order {order} exceeds the supported maximum {MAX_ORDER}"
        )
    binom = _binomial_row(order)
    weights = np.array(
        [(-1) ** k * binom[k] for k in range(order + 1)], dtype=np.float64
    )
    weights.setflags(write=False)
    return StencilTable(order=order, weights=weights)


@lru_cache(maxsize=None)
def _collapsed_weights_cached(order: int) -> np.ndarray:
    # Fold the factorial-weighted sum of difference stencils into one
    # weight per lag: w_k = sum_{n>=k} (1/n!) * (-1)^k * C(n, k), so the
    # predictor becomes a single dot product over the history window.
    w = np.zeros(order + 1, dtype=np.float64)
    for n in range(order + 1):
        fact = float(math.factorial(n))
        binom = _binomial_row(n)
        for k in range(n + 1):
            w[k] += ((-1) ** k) * binom[k] / fact
    w.setflags(write=False)
    return w


def collapsed_weights(order: int) -> np.ndarray:
    """Per-lag predictor weights (read-only); lag k multiplies f_{t-1-k}."""
    if order < 0:
        raise InvalidConfigError(f"order must be >= 0, got {order}")
    if order > MAX_ORDER:
        raise UnsupportedOrderError(
            f"order {order} exceeds the supported maximum {MAX_ORDER}"
        )
    return _collapsed_weights_cached(order)


def taylor_predict(history, cfg: TaylorConfig) -> np.ndarray:
    """Predict the next feature vector from N+1 predecessors.

    ``history[k]`` must be the vector k frames back from the prediction
    target's predecessor, i.e. ordered most recent first:
    f_{t-1}, f_{t-2}, ..., f_{t-1-N}.
    """
    hist = np.asarray(history, dtype=np.float64)
    if hist.ndim == 1:
        hist = hist[:, None]
        squeeze = True
    else:
        squeeze = False
    if hist.ndim != 2 or hist.shape[0] != cfg.order + 1:
        raise ShapeError(
            f"history must hold exactly order+1 = {cfg.order + 1} vectors of one "
            f"dimension, got shape {np.asarray(history).shape}"
        )
    pred = collapsed_weights(cfg.order) @ hist
    return pred[0] if squeeze else pred


def _norm_over_last_axis(err: np.ndarray) -> np.ndarray:
    # float64 throughout; err is (..., D)
    return np.sqrt(np.einsum("...d,...d->...", err, err))


def residual_series(
    features: Union[FeatureSequence, RegionSequence], cfg: TaylorConfig
) -> ResidualSeries:
    """Score every frame by its prediction error.

    For region input the residual is computed per region and averaged
    (fixed region order) into one score per frame.  Output is identical
    regardless of storage dtype or internal chunking: the heavy frames
    (t > N) run as one vectorized pass, the warm-up frames individually at
    their effective order.
    """
    if isinstance(features, FeatureSequence):
        data = features.data  # (T, D)
        per_region = False
        pool = None
    elif isinstance(features, RegionSequence):
        data = features.data  # (T, R, D)
        per_region = True
        pool = PoolConfig(features.regions_per_side)
    else:
        raise ShapeError(
            f"expected FeatureSequence or RegionSequence, got {type(features).__name__}"
        )
    t_total = data.shape[0]
    if t_total == 0:
        raise EmptyInputError("cannot score a sequence with zero frames")

    n_max = cfg.order
    values = np.zeros(t_total, dtype=np.float64)
    order_used = np.minimum(np.arange(t_total) - 1, n_max).astype(np.int64)
    order_used[0] = -1

    # Warm-up frames: t in [1, min(N, T-1)] each use order t-1.
    for t in range(1, min(n_max + 1, t_total)):
        w = collapsed_weights(t - 1)
        pred = np.zeros(data.shape[1:], dtype=np.float64)
        for k in range(t):
            pred += w[k] * data[t - 1 - k]
        err = data[t] - pred
        if per_region:
            values[t] = float(np.mean(_norm_over_last_axis(err)))
        else:
            values[t] = float(np.linalg.norm(err))

    # Full-order frames, vectorized over t >= N+1.
    if t_total > n_max + 1:
        w = collapsed_weights(n_max)
        pred = np.zeros(
            (t_total - n_max - 1,) + data.shape[1:], dtype=np.float64
        )
        for k in range(n_max + 1):
            # slice of f_{t-1-k} aligned with t = N+1 .. T-1
            pred += w[k] * data[n_max - k : t_total - 1 - k]
        err = data[n_max + 1 :] - pred
        r = _norm_over_last_axis(err)
        if per_region:
            r = r.mean(axis=1)
        values[n_max + 1 :] = r

    return ResidualSeries(values=values, order_used=order_used, config=cfg, pool=pool)


def residual_series_oracle(
    features: Union[FeatureSequence, RegionSequence], cfg: TaylorConfig
) -> ResidualSeries:
    """Brute-force reference for :func:`residual_series`.

    Evaluates the literal double sum (orders n, lags k) with factorials and
    binomials recomputed per call, one frame and one region at a time.
    Slow by design; exists so the fast path has an independent check.
    """
    if isinstance(features, FeatureSequence):
        data = features.data[:, None, :].astype(np.float64)
        per_region = False
        pool = None
    elif isinstance(features, RegionSequence):
        data = features.data.astype(np.float64)
        per_region = True
        pool = PoolConfig(features.regions_per_side)
    else:
        raise ShapeError(
            f"expected FeatureSequence or RegionSequence, got {type(features).__name__}"
        )
    t_total, regions, _ = data.shape
    if t_total == 0:
        raise EmptyInputError("cannot score a sequence with zero frames")

    values = np.zeros(t_total, dtype=np.float64)
    order_used = np.full(t_total, -1, dtype=np.int64)
    for t in range(1, t_total):
        n_eff = min(cfg.order, t - 1)
        order_used[t] = n_eff
        region_norms = []
        for r in range(regions):
            pred = np.zeros(data.shape[2], dtype=np.float64)
            for n in range(n_eff + 1):
                diff = np.zeros(data.shape[2], dtype=np.float64)
                for k in range(n + 1):
                    diff += ((-1) ** k) * math.comb(n, k) * data[t - 1 - k, r]
                pred += diff / math.factorial(n)
            region_norms.append(float(np.linalg.norm(data[t, r] - pred)))
        values[t] = sum(region_norms) / regions if per_region else region_norms[0]

    return ResidualSeries(values=values, order_used=order_used, config=cfg, pool=pool)


def surprise(residual: float, params: SurpriseParams) -> float:
    """Map a residual to Gaussian-model self-information, r^2 / (2 sigma^2).

    The additive constant of the underlying log-density is dropped; the map
    is strictly increasing in the residual, so rankings are unchanged.
    """
    if residual < 0:
        raise InvalidConfigError(f"residual must be non-negative, got {residual}")
    return float(residual) ** 2 / (2.0 * params.sigma**2)
