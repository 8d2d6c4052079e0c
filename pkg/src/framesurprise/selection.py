"""Turn per-frame scores into a K-frame selection.

Two readings of "pick the K most surprising frames in their local context"
are shipped: ``swift_local_max`` ranks windowed local maxima of the
residual curve (greedy fill when maxima are scarce), and
``swift_window_argmax`` takes the best frame of each of K contiguous
windows (guaranteed temporal coverage).  Three query-agnostic baselines
(uniform, adjacent-frame difference, cosine uniqueness) share the same
result type so they can be compared like for like.

Every strategy is deterministic: all ties break toward the smaller frame
index, and outputs are sorted, unique, in-range, and of length min(K, T).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetError, InvalidConfigError
from .taylor import ResidualSeries
from .trajectory import FeatureSequence

__all__ = [
    "STRATEGIES",
    "SelectionRequest",
    "SelectionResult",
    "select_swift_local_max",
    "select_swift_window_argmax",
    "select_uniform",
    "select_frame_difference",
    "select_cosine_uniqueness",
    "subsample_candidates",
]

STRATEGIES = (
    "swift_local_max",
    "swift_window_argmax",
    "uniform",
    "frame_difference",
    "cosine_uniqueness",
)


@dataclass(frozen=True)
class SelectionRequest:
    """Frame budget K, strategy name, and the local-maximum neighborhood
    half-width used by ``swift_local_max``."""

    budget: int
    strategy: str = "swift_local_max"
    window: int = 1

    def __post_init__(self):
        if self.budget < 1:
            raise InvalidConfigError(f"budget must be >= 1, got {self.budget}")
        if self.window < 1:
            raise InvalidConfigError(f"window must be >= 1, got {self.window}")
        if self.strategy not in STRATEGIES:
            raise InvalidConfigError(
                f"unknown strategy {self.strategy!r}; expected one of {STRATEGIES}"
            )


@dataclass
class SelectionResult:
    """Selected frame indices (strictly increasing), their per-index
    scores under the strategy that chose them, and echo metadata."""

    indices: np.ndarray
    scores: np.ndarray
    strategy: str
    config_echo: dict = field(default_factory=dict)


def _echo_from_residuals(r: ResidualSeries) -> dict:
    pool = "pre-pooled" if r.pool is None else r.pool.regions_per_side
    return {"order": r.config.order, "pool": pool}


def _rank_desc(scores: np.ndarray) -> np.ndarray:
    """Indices ordered by score descending, smaller index first on ties."""
    return np.lexsort((np.arange(scores.shape[0]), -scores))


def _result_from_scores(
    scores: np.ndarray, chosen: np.ndarray, strategy: str, echo: dict
) -> SelectionResult:
    chosen = np.sort(np.asarray(chosen, dtype=np.int64))
    return SelectionResult(
        indices=chosen,
        scores=scores[chosen].astype(np.float64),
        strategy=strategy,
        config_echo=echo,
    )


def _top_k(scores: np.ndarray, k: int) -> np.ndarray:
    return _rank_desc(scores)[: min(k, scores.shape[0])]


def _local_maxima(values: np.ndarray, window: int) -> np.ndarray:
    """Indices whose value dominates their +-window neighborhood.

    A frame qualifies when no strictly larger value sits within the
    window; runs of equal qualifying values (plateaus) are credited to
    their leftmost member only.
    """
    t = values.shape[0]
    wmax = values.copy()
    for d in range(1, window + 1):
        if d >= t:
            break
        np.maximum(wmax[:-d], values[d:], out=wmax[:-d])
        np.maximum(wmax[d:], values[:-d], out=wmax[d:])
    qualified = values >= wmax
    marked = qualified.copy()
    if t > 1:
        dup = qualified[1:] & qualified[:-1] & (values[1:] == values[:-1])
        marked[1:] &= ~dup
    return np.nonzero(marked)[0]


def select_swift_local_max(r: ResidualSeries, req: SelectionRequest) -> SelectionResult:
    """Top-K local maxima of the residual curve, greedily filled.

    Local maxima are ranked by residual (descending, smaller index on
    ties) and the first K taken; if fewer exist, the remaining budget is
    filled with the highest-residual unselected frames under the same tie
    rule.  Output sorted ascending.
    """
    values = r.values
    maxima = _local_maxima(values, req.window)
    ranked_maxima = maxima[_rank_desc(values[maxima])]
    chosen = list(ranked_maxima[: req.budget])
    if len(chosen) < min(req.budget, values.shape[0]):
        taken = np.zeros(values.shape[0], dtype=bool)
        taken[chosen] = True
        for idx in _rank_desc(values):
            if not taken[idx]:
                chosen.append(idx)
                taken[idx] = True
                if len(chosen) == min(req.budget, values.shape[0]):
                    break
    return _result_from_scores(
        values, np.array(chosen, dtype=np.int64), "swift_local_max", _echo_from_residuals(r)
    )


def select_swift_window_argmax(
    r: ResidualSeries, req: SelectionRequest
) -> SelectionResult:
    """Best frame of each of K contiguous windows covering [0, T)."""
    values = r.values
    t = values.shape[0]
    k = req.budget
    if k > t:
        raise BudgetError(f"budget {k} exceeds the {t} available frames")
    edges = (np.arange(k + 1, dtype=np.int64) * t) // k
    chosen = np.array(
        [edges[j] + int(np.argmax(values[edges[j] : edges[j + 1]])) for j in range(k)],
        dtype=np.int64,
    )
    return _result_from_scores(
        values, chosen, "swift_window_argmax", _echo_from_residuals(r)
    )


def _uniform_indices(total: int, k: int) -> np.ndarray:
    if k >= total:
        return np.arange(total, dtype=np.int64)
    if k == 1:
        return np.zeros(1, dtype=np.int64)
    idx = (np.arange(k, dtype=np.int64) * (total - 1)) // (k - 1)
    idx = np.unique(idx)
    if idx.shape[0] < k:  # unreachable for k <= total; keep the contract total
        unused = np.setdiff1d(np.arange(total, dtype=np.int64), idx)
        idx = np.sort(np.concatenate([idx, unused[: k - idx.shape[0]]]))
    return idx


def select_uniform(total_frames: int, budget: int) -> SelectionResult:
    """Evenly spaced frames: index j maps to floor(j*(T-1)/(K-1))."""
    if total_frames < 1:
        raise InvalidConfigError(f"total_frames must be >= 1, got {total_frames}")
    if budget < 1:
        raise InvalidConfigError(f"budget must be >= 1, got {budget}")
    idx = _uniform_indices(total_frames, budget)
    return SelectionResult(
        indices=idx,
        scores=np.zeros(idx.shape[0], dtype=np.float64),
        strategy="uniform",
        config_echo={},
    )


def select_frame_difference(
    features: FeatureSequence, req: SelectionRequest
) -> SelectionResult:
    """Top-K frames by adjacent-frame feature distance (frame 0 scores 0)."""
    data = features.data
    scores = np.zeros(features.frames, dtype=np.float64)
    if features.frames > 1:
        delta = data[1:].astype(np.float64) - data[:-1].astype(np.float64)
        scores[1:] = np.sqrt(np.einsum("td,td->t", delta, delta))
    return _result_from_scores(
        scores, _top_k(scores, req.budget), "frame_difference", {}
    )


def select_cosine_uniqueness(
    features: FeatureSequence, req: SelectionRequest
) -> SelectionResult:
    """Top-K frames by 1 - max cosine similarity to any other frame.

    All-zero frames are defined to have similarity 0 with everything,
    making them maximally unique without dividing by zero.  The full
    T x T similarity matrix is fine at candidate-pool scale.
    """
    data = features.data.astype(np.float64)
    t = features.frames
    if t == 1:
        uniq = np.ones(1, dtype=np.float64)
    else:
        norms = np.linalg.norm(data, axis=1)
        safe = np.where(norms > 0, norms, 1.0)
        unit = data / safe[:, None]
        sims = unit @ unit.T
        np.fill_diagonal(sims, -np.inf)
        uniq = 1.0 - sims.max(axis=1)
    return _result_from_scores(
        uniq, _top_k(uniq, req.budget), "cosine_uniqueness", {}
    )


def subsample_candidates(total_frames: int, pool: int) -> np.ndarray:
    """Evenly spaced candidate indices into the raw video's frame numbering."""
    if total_frames < 1:
        raise InvalidConfigError(f"total_frames must be >= 1, got {total_frames}")
    if pool < 1:
        raise InvalidConfigError(f"pool must be >= 1, got {pool}")
    return _uniform_indices(total_frames, pool)
