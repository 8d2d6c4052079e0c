"""Feature-trajectory data model, spatial pooling, and synthetic trajectories.

A video is represented by the latent feature vectors of its frames.  Two
levels of granularity exist side by side:

* :class:`FeatureSequence` -- one pooled D-dimensional vector per frame
  (shape ``(T, D)``), the input to residual scoring.
* :class:`TokenGridSequence` -- the raw G x G token grid a vision encoder
  emits per frame (shape ``(T, G*G, D)``), which :func:`pool_tokens`
  aggregates into an S x S grid of region means.

Arrays are stored as handed in (float32 payloads from disk stay float32);
all arithmetic in this package accumulates in float64.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyInputError, InvalidConfigError, InvalidDataError, ShapeError

__all__ = [
    "FeatureSequence",
    "TokenGridSequence",
    "PoolConfig",
    "RegionSequence",
    "SurpriseEvent",
    "pool_tokens",
    "flatten_to_features",
    "gen_synthetic",
]


def _as_float_array(data, name: str) -> np.ndarray:
    """Coerce to a float32/float64 ndarray and reject non-finite values."""
    arr = np.asarray(data)
    if arr.dtype not in (np.float32, np.float64):
        arr = arr.astype(np.float64)
    if arr.size and not np.isfinite(arr).all():
        raise InvalidDataError(f"{name} contains NaN or Inf values")
    return arr


@dataclass
class FeatureSequence:
    """Per-frame pooled feature vectors: ``data[t]`` is the frame-t vector.

    ``layer_index`` records which encoder layer produced the features and
    ``source_fps`` the sampling rate of the underlying video; both are
    informational only and never influence computation.
    """

    data: np.ndarray
    layer_index: Optional[int] = None
    source_fps: Optional[float] = None

    def __post_init__(self):
        self.data = _as_float_array(self.data, "feature data")
        if self.data.ndim != 2:
            raise ShapeError(f"feature data must be (T, D), got shape {self.data.shape}")
        if self.data.shape[0] == 0:
            raise EmptyInputError("feature sequence has zero frames")
        if self.data.shape[1] == 0:
            raise ShapeError("feature dimension must be at least 1")

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


@dataclass
class TokenGridSequence:
    """Raw encoder tokens: ``data[t, g, :]`` is token g of frame t, with the
    G x G grid flattened row-major (``g = row * G + col``)."""

    data: np.ndarray
    grid_side: int
    layer_index: Optional[int] = None

    def __post_init__(self):
        self.data = _as_float_array(self.data, "token data")
        if self.grid_side < 1:
            raise InvalidConfigError(f"grid_side must be >= 1, got {self.grid_side}")
        if self.data.ndim != 3:
            raise ShapeError(f"token data must be (T, G*G, D), got shape {self.data.shape}")
        if self.data.shape[0] == 0:
            raise EmptyInputError("token sequence has zero frames")
        if self.data.shape[1] != self.grid_side * self.grid_side:
            raise ShapeError(
                f"token axis has {self.data.shape[1]} entries, expected "
                f"G*G = {self.grid_side * self.grid_side}"
            )
        if self.data.shape[2] == 0:
            raise ShapeError("feature dimension must be at least 1")

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[2]


@dataclass(frozen=True)
class PoolConfig:
    """Spatial pooling granularity: the token grid is reduced to an
    S x S grid of region means (S=1 is global mean pooling)."""

    regions_per_side: int = 1

    def __post_init__(self):
        if self.regions_per_side < 1:
            raise InvalidConfigError(
                f"regions_per_side must be >= 1, got {self.regions_per_side}"
            )


@dataclass
class RegionSequence:
    """Pooled region features: ``data[t, r, :]`` is the mean feature of
    region r (row-major over the S x S region grid) at frame t."""

    data: np.ndarray
    regions_per_side: int

    def __post_init__(self):
        self.data = _as_float_array(self.data, "region data")
        if self.data.ndim != 3:
            raise ShapeError(f"region data must be (T, R, D), got shape {self.data.shape}")
        if self.data.shape[0] == 0:
            raise EmptyInputError("region sequence has zero frames")
        s = self.regions_per_side
        if s < 1 or self.data.shape[1] != s * s:
            raise ShapeError(
                f"region axis has {self.data.shape[1]} entries, expected "
                f"S*S = {s * s}"
            )

    @property
    def frames(self) -> int:
        return self.data.shape[0]

    @property
    def regions(self) -> int:
        return self.data.shape[1]

    @property
    def dim(self) -> int:
        return self.data.shape[2]


@dataclass(frozen=True)
class SurpriseEvent:
    """Ground-truth step event in a synthetic trajectory: at
    ``frame_index`` the trajectory jumps by a vector of L2 norm
    ``jump_magnitude`` and stays shifted from then on."""

    frame_index: int
    jump_magnitude: float

    def __post_init__(self):
        if self.jump_magnitude <= 0:
            raise InvalidConfigError(
                f"jump_magnitude must be positive, got {self.jump_magnitude}"
            )


def _bucket_edges(grid_side: int, regions_per_side: int) -> np.ndarray:
    # floor(a*G/S) for a = 0..S; adjacent edges delimit the token rows/cols
    # of region a.  Covers every index exactly once for any S <= G.
    return (np.arange(regions_per_side + 1, dtype=np.int64) * grid_side) // regions_per_side


def pool_tokens(grid: TokenGridSequence, cfg: PoolConfig) -> RegionSequence:
    """Aggregate each frame's G x G token grid into an S x S grid of means.

    Region (a, b) averages the tokens whose row index falls in
    ``[floor(a*G/S), floor((a+1)*G/S))`` and column index in the analogous
    bucket, so non-divisible grids get adaptive bucket sizes and every
    token contributes to exactly one region.  Means are accumulated in
    float64 regardless of the storage dtype.
    """
    s = cfg.regions_per_side
    g = grid.grid_side
    if s > g:
        raise InvalidConfigError(f"regions_per_side {s} exceeds grid_side {g}")
    t, _, d = grid.data.shape
    view = grid.data.reshape(t, g, g, d)
    edges = _bucket_edges(g, s)
    out = np.empty((t, s * s, d), dtype=np.float64)
    for a in range(s):
        r0, r1 = edges[a], edges[a + 1]
        for b in range(s):
            c0, c1 = edges[b], edges[b + 1]
            out[:, a * s + b, :] = view[:, r0:r1, c0:c1, :].mean(
                axis=(1, 2), dtype=np.float64
            )
    return RegionSequence(data=out, regions_per_side=s)


def flatten_to_features(regions: RegionSequence) -> FeatureSequence:
    """Drop the singleton region axis of a globally pooled sequence."""
    if regions.regions != 1:
        raise ShapeError(
            f"can only flatten a single-region sequence, got R={regions.regions}; "
            "score per-region sequences directly instead"
        )
    return FeatureSequence(data=regions.data[:, 0, :])


def _validate_events(
    events: Sequence[SurpriseEvent], frames: int, base_degree: int
) -> list[SurpriseEvent]:
    validated = list(events)
    min_gap = 2 * (base_degree + 1)
    prev = None
    for ev in validated:
        if not isinstance(ev, SurpriseEvent):
            ev = SurpriseEvent(*ev)
        if not 1 <= ev.frame_index < frames:
            raise InvalidConfigError(
                f"event frame {ev.frame_index} outside valid range [1, {frames})"
            )
        if prev is not None:
            if ev.frame_index <= prev:
                raise InvalidConfigError("event frames must be strictly increasing")
            if ev.frame_index - prev < min_gap:
                raise InvalidConfigError(
                    f"event frames {prev} and {ev.frame_index} closer than the "
                    f"minimum gap 2*(degree+1) = {min_gap}"
                )
        prev = ev.frame_index
    return validated


def gen_synthetic(
    frames: int,
    dim: int,
    base_degree: int,
    events: Sequence[SurpriseEvent],
    seed: int,
) -> tuple[FeatureSequence, list[SurpriseEvent]]:
    """Generate a smooth trajectory with known step events, for verification.

    The base trajectory is one polynomial of degree ``base_degree`` per
    component, evaluated on normalized time t/(T-1) so amplitudes stay O(1).
    Each event adds a persistent step of exactly the requested L2 magnitude
    from its frame onward, pointing in a random direction whose sign is
    canonicalized (first nonzero component positive).  Identical seed and
    parameters reproduce the trajectory bit for bit.

    Returns the sequence together with the validated ground-truth events.
    """
    if frames < 1:
        raise InvalidConfigError(f"frames must be >= 1, got {frames}")
    if dim < 1:
        raise InvalidConfigError(f"dim must be >= 1, got {dim}")
    if not 0 <= base_degree <= 3:
        raise InvalidConfigError(f"base_degree must be in [0, 3], got {base_degree}")
    validated = _validate_events(events, frames, base_degree)

    rng = np.random.default_rng(seed)
    # Base coefficients are drawn before event directions so the same seed
    # yields the same base trajectory with or without events.
    coeffs = rng.standard_normal((base_degree + 1, dim))
    tau = np.arange(frames, dtype=np.float64) / max(1, frames - 1)
    data = np.zeros((frames, dim), dtype=np.float64)
    for p in range(base_degree + 1):
        data += np.outer(tau**p, coeffs[p])

    for ev in validated:
        direction = rng.standard_normal(dim)
        norm = np.linalg.norm(direction)
        if norm == 0.0:  # probability zero, but keep the contract total
            direction = np.zeros(dim)
            direction[0] = 1.0
            norm = 1.0
        direction /= norm
        nonzero = np.nonzero(direction)[0]
        if direction[nonzero[0]] < 0:
            direction = -direction
        data[ev.frame_index :] += ev.jump_magnitude * direction

    return FeatureSequence(data=data), validated
