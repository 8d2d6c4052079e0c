"""In-process bindings for feature-extraction pipelines.

Pipelines that already hold per-frame features in memory should not pay a
file round trip to score them.  This package exposes the scoring/selection
core over contiguous float32 buffers with strict validation at the
boundary: dtype, contiguity, and shape are checked before anything runs,
violations raise :class:`BoundaryError` naming the failing dimension, and
no call ever mutates or copies the caller's buffer (beyond the float64
accumulation the kernels do internally).

Results are numerically identical - bitwise on the float64 outputs - to
running the batch CLI on the same data written to an FTRJ file.

Calls are reentrant and hold no module state; the heavy kernels are numpy
reductions, which release the interpreter lock internally, so concurrent
calls on distinct buffers are safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from framesurprise import (
    FeatureSequence,
    PoolConfig,
    ResidualSeries,
    SelectionRequest,
    TaylorConfig,
    TokenGridSequence,
    pool_tokens,
    read_trajectory,
    residual_series,
    select_swift_local_max,
    select_swift_window_argmax,
    select_uniform,
    write_trajectory,
)

__all__ = ["BoundaryError", "BoundBuffer", "score", "select", "read_ftrj", "write_ftrj"]

__version__ = "0.1.0"

_RESIDUAL_STRATEGIES = ("swift_local_max", "swift_window_argmax", "uniform")


class BoundaryError(ValueError):
    """A buffer or argument failed validation at the bindings boundary."""


@dataclass(frozen=True)
class BoundBuffer:
    """A validated, zero-copy view of a caller's feature buffer.

    ``grid_side`` is 0 for pre-pooled (T, D) buffers and the G of the
    token grid for (T, G*G, D) buffers.
    """

    array: np.ndarray
    frames: int
    grid_side: int
    dim: int
    read_only: bool

    @classmethod
    def bind(cls, buffer) -> "BoundBuffer":
        arr = np.asarray(buffer)
        if arr.dtype != np.float32:
            raise BoundaryError(
                f"buffer must be float32, got {arr.dtype} (convert before binding)"
            )
        if not arr.flags["C_CONTIGUOUS"]:
            raise BoundaryError("buffer must be C-contiguous")
        if arr.ndim == 2:
            frames, dim = arr.shape
            grid_side = 0
        elif arr.ndim == 3:
            frames, tokens, dim = arr.shape
            grid_side = math.isqrt(tokens)
            if grid_side * grid_side != tokens:
                raise BoundaryError(
                    f"token axis has {tokens} entries, which is not a square grid"
                )
        else:
            raise BoundaryError(
                f"buffer must be (frames, dim) or (frames, tokens, dim), got "
                f"{arr.ndim} axes"
            )
        if frames < 1:
            raise BoundaryError(f"frame axis must have at least 1 entry, got {frames}")
        if dim < 1:
            raise BoundaryError(f"dim axis must have at least 1 entry, got {dim}")
        if not np.isfinite(arr).all():
            raise BoundaryError("buffer contains NaN or Inf values")
        return cls(
            array=arr,
            frames=frames,
            grid_side=grid_side,
            dim=dim,
            read_only=not arr.flags.writeable,
        )

    def as_sequence(self):
        if self.grid_side == 0:
            return FeatureSequence(self.array)
        return TokenGridSequence(data=self.array, grid_side=self.grid_side)


def score(buffer, order: int = 3, pool: int = 1):
    """Per-frame surprise scores for a contiguous float32 feature buffer.

    2D buffers are scored directly; 3D token-grid buffers are pooled into
    a ``pool`` x ``pool`` region grid first.  Returns the residual array
    and the effective expansion order used at each frame (-1 at frame 0).
    """
    bound = BoundBuffer.bind(buffer)
    seq = bound.as_sequence()
    cfg = TaylorConfig(order=order)
    if isinstance(seq, TokenGridSequence):
        r = residual_series(pool_tokens(seq, PoolConfig(pool)), cfg)
    else:
        r = residual_series(seq, cfg)
    return r.values, r.order_used


def select(residuals, k: int, strategy: str = "swift_local_max", window: int = 1):
    """Pick ``k`` frame indices from a residual array.

    Supports the residual-driven strategies (swift_local_max,
    swift_window_argmax, uniform); the feature-space baselines need the
    feature vectors themselves and are rejected here.  Returns plain
    ``(indices, scores)`` lists.
    """
    arr = np.asarray(residuals, dtype=np.float64)
    if arr.ndim != 1:
        raise BoundaryError(f"residuals must be one-dimensional, got {arr.ndim} axes")
    if arr.size < 1:
        raise BoundaryError("residuals must contain at least one frame")
    if not np.isfinite(arr).all():
        raise BoundaryError("residuals contain NaN or Inf values")
    if np.any(arr < 0):
        raise BoundaryError("residuals must be non-negative")
    if strategy not in _RESIDUAL_STRATEGIES:
        raise BoundaryError(
            f"unknown strategy {strategy!r}; expected one of {_RESIDUAL_STRATEGIES}"
        )
    if strategy == "uniform":
        result = select_uniform(arr.size, k)
    else:
        order_used = np.minimum(np.arange(arr.size) - 1, 0).astype(np.int64)
        series = ResidualSeries(
            values=arr, order_used=order_used, config=TaylorConfig()
        )
        req = SelectionRequest(budget=k, strategy=strategy, window=window)
        if strategy == "swift_window_argmax":
            result = select_swift_window_argmax(series, req)
        else:
            result = select_swift_local_max(series, req)
    return [int(i) for i in result.indices], [float(s) for s in result.scores]


def read_ftrj(path) -> np.ndarray:
    """Load an FTRJ container into a float32 array: (T, D) for pre-pooled
    files, (T, G*G, D) for token grids."""
    return read_trajectory(path).data


def write_ftrj(array, path) -> None:
    """Write a contiguous float32 buffer as an FTRJ container."""
    bound = BoundBuffer.bind(array)
    write_trajectory(bound.as_sequence(), path)
