"""Bit-exact trajectory container plus CSV/JSON exports.

File layout ("FTRJ" container, 28-byte header, everything little-endian):

    offset  size  field
    0       4     magic "FTRJ"
    4       4     u32 version (always 1)
    8       4     u32 frames T
    12      4     u32 grid_side G (0 = pre-pooled per-frame features)
    16      4     u32 dim D
    20      4     i32 layer_index (-1 = unset)
    24      4     reserved, zero
    28      ...   T * max(1, G*G) * D float32 values, frame-major,
                  token-row-major

Writers emit byte-identical files for identical inputs; readers reject
wrong magic, unknown versions, size mismatches, and non-finite payloads
with distinct error classes.  The payload digest used in selection
reports is 64-bit FNV-1a (offset 0xcbf29ce484222325, prime 0x100000001b3)
over the payload bytes; it is provenance, not cryptography.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import (
    InvalidDataError,
    TrajectoryFormatError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from .selection import SelectionResult
from .taylor import ResidualSeries
from .trajectory import FeatureSequence, TokenGridSequence

__all__ = [
    "MAGIC",
    "VERSION",
    "HEADER_SIZE",
    "SelectionReport",
    "read_trajectory",
    "write_trajectory",
    "payload_bytes",
    "fnv1a64",
    "format_score",
    "export_residuals_csv",
    "write_selection_json",
]

MAGIC = b"FTRJ"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIi")  # + 4 reserved zero bytes
HEADER_SIZE = _HEADER.size + 4

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes) -> int:
    """64-bit FNV-1a hash of a byte string."""
    h = _FNV_OFFSET
    for b in data:
        h = ((h ^ b) * _FNV_PRIME) & _U64
    return h


def payload_bytes(seq: Union[FeatureSequence, TokenGridSequence]) -> bytes:
    """The exact float32 little-endian payload the container stores."""
    return np.ascontiguousarray(seq.data, dtype="<f4").tobytes()


def write_trajectory(
    seq: Union[FeatureSequence, TokenGridSequence], path
) -> None:
    """Serialize a sequence to the FTRJ container at ``path``."""
    if isinstance(seq, TokenGridSequence):
        frames, grid_side, dim = seq.frames, seq.grid_side, seq.dim
    elif isinstance(seq, FeatureSequence):
        frames, grid_side, dim = seq.frames, 0, seq.dim
    else:
        raise TypeError(f"cannot serialize {type(seq).__name__}")
    layer = seq.layer_index if seq.layer_index is not None else -1
    header = _HEADER.pack(MAGIC, VERSION, frames, grid_side, dim, layer) + b"\x00" * 4
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(payload_bytes(seq))


def read_trajectory(path) -> Union[FeatureSequence, TokenGridSequence]:
    """Load an FTRJ container; G=0 files come back as FeatureSequence.

    Payload values stay float32 in memory (they compare bitwise with the
    file); all scoring kernels accumulate in float64.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < HEADER_SIZE or raw[:4] != MAGIC:
        raise TrajectoryFormatError(f"{path}: not an FTRJ trajectory file")
    magic, version, frames, grid_side, dim, layer = _HEADER.unpack(
        raw[: _HEADER.size]
    )
    if version != VERSION:
        raise UnsupportedVersionError(
            f"{path}: container version {version}, expected {VERSION}"
        )
    if frames == 0 or dim == 0:
        raise InvalidDataError(f"{path}: header declares an empty sequence")
    tokens = max(1, grid_side * grid_side)
    expected = HEADER_SIZE + 4 * frames * tokens * dim
    if len(raw) != expected:
        raise TruncatedFileError(
            f"{path}: file is {len(raw)} bytes, header implies {expected}"
        )
    payload = np.frombuffer(raw, dtype="<f4", offset=HEADER_SIZE)
    if not np.isfinite(payload).all():
        raise InvalidDataError(f"{path}: payload contains NaN or Inf values")
    layer_index = None if layer == -1 else layer
    if grid_side == 0:
        data = payload.reshape(frames, dim)
        return FeatureSequence(data=data, layer_index=layer_index)
    data = payload.reshape(frames, tokens, dim)
    return TokenGridSequence(data=data, grid_side=grid_side, layer_index=layer_index)


def format_score(value: float) -> str:
    """Fixed-notation decimal with 9 significant digits (zero gets nine
    decimal places), precise enough to round-trip at 1e-8 relative."""
    if value == 0:
        return "0.000000000"
    out = np.format_float_positional(
        float(value), precision=9, unique=False, fractional=False
    )
    return out.rstrip(".")


def export_residuals_csv(
    r: ResidualSeries, selected: Optional[SelectionResult], path
) -> None:
    """One row per frame: index, residual, effective order, selected flag."""
    flags = np.zeros(r.frames, dtype=np.int64)
    if selected is not None:
        flags[selected.indices] = 1
    lines = ["frame_index,residual,effective_order,selected"]
    for t in range(r.frames):
        lines.append(
            f"{t},{format_score(r.values[t])},{r.order_used[t]},{flags[t]}"
        )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass
class SelectionReport:
    """What a selection run chose and from which bytes it chose it."""

    strategy: str
    order: Optional[int]
    pool: Union[int, str, None]
    budget: int
    indices: list
    scores: list
    digest: str

    def __post_init__(self):
        if len(self.indices) != len(self.scores):
            raise InvalidDataError("indices and scores must have equal length")
        if list(self.indices) != sorted(self.indices):
            raise InvalidDataError("indices must be sorted ascending")


def write_selection_json(report: SelectionReport, path) -> None:
    """Canonical single-line JSON: fixed key order, compact separators,
    byte-identical across runs for identical inputs."""
    doc = {
        "strategy": report.strategy,
        "order": report.order,
        "pool": report.pool,
        "budget": report.budget,
        "indices": [int(i) for i in report.indices],
        "scores": [float(s) for s in report.scores],
        "digest": report.digest,
    }
    with open(path, "w", newline="") as fh:
        fh.write(json.dumps(doc, separators=(",", ":")) + "\n")
