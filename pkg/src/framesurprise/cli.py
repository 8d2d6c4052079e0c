"""Batch command line: score, select, synth, and bench over FTRJ files.

Every subcommand is deterministic for fixed inputs and flags; timing
measurements (bench) go to stderr so file outputs stay byte-identical
across runs.  Errors exit nonzero with a one-line diagnostic naming the
failure class.
"""

from __future__ import annotations

import argparse
import json
import struct
import sys
import time
from pathlib import Path

import numpy as np

from . import io as tio
from .errors import FrameSurpriseError, InvalidConfigError
from .selection import (
    STRATEGIES,
    SelectionRequest,
    SelectionResult,
    select_cosine_uniqueness,
    select_frame_difference,
    select_swift_local_max,
    select_swift_window_argmax,
    select_uniform,
    subsample_candidates,
)
from .taylor import ResidualSeries, TaylorConfig, residual_series
from .trajectory import (
    FeatureSequence,
    PoolConfig,
    SurpriseEvent,
    TokenGridSequence,
    flatten_to_features,
    gen_synthetic,
    pool_tokens,
)

ORDER_SWEEP = (1, 2, 3, 6)
POOL_SWEEP = (1, 2, 4, 7, 14)
BUDGET_SWEEP = (2, 4, 8, 16, 32)


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--order", type=int, default=3, help="expansion order N (default 3)")
    p.add_argument("--pool", type=int, default=1, help="pooling grid side S (default 1)")
    p.add_argument("--budget", type=int, default=32, help="frame budget K (default 32)")
    p.add_argument(
        "--strategy", choices=STRATEGIES, default="swift_local_max",
        help="selection strategy (default swift_local_max)",
    )
    p.add_argument(
        "--candidates", type=int, default=128,
        help="candidate pool size for select (default 128)",
    )
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument(
        "--window", type=int, default=1,
        help="local-maximum neighborhood half-width (default 1)",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="framesurprise",
        description="Score video feature trajectories and select keyframes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_score = sub.add_parser("score", help="write per-frame residuals as CSV")
    p_score.add_argument("--input", required=True)
    p_score.add_argument("--output", required=True)
    _add_common(p_score)

    p_select = sub.add_parser("select", help="pick K frames, print their indices")
    p_select.add_argument("--input", required=True)
    p_select.add_argument("--output", help="also write a JSON selection report here")
    _add_common(p_select)

    p_synth = sub.add_parser("synth", help="generate a synthetic trajectory file")
    p_synth.add_argument("--output", required=True)
    p_synth.add_argument("--frames", type=int, default=64)
    p_synth.add_argument("--dim", type=int, default=8)
    p_synth.add_argument("--degree", type=int, default=1, help="base polynomial degree")
    p_synth.add_argument(
        "--events", default="",
        help="comma-separated frame:magnitude step events, e.g. 10:5.0,30:8.0",
    )
    _add_common(p_synth)

    p_bench = sub.add_parser("bench", help="sweep order/pool/budget, write CSV rows")
    p_bench.add_argument("--input", required=True, nargs="+")
    p_bench.add_argument("--output", required=True)
    _add_common(p_bench)
    return parser


def _score_sequence(seq, order: int, pool: int) -> ResidualSeries:
    """Pool (token grids only) and score; returns the residual series."""
    cfg = TaylorConfig(order=order)
    if isinstance(seq, TokenGridSequence):
        return residual_series(pool_tokens(seq, PoolConfig(pool)), cfg)
    return residual_series(seq, cfg)


def _feature_view(seq, pool: int) -> FeatureSequence:
    """Per-frame feature vectors for the feature-space baselines."""
    if isinstance(seq, FeatureSequence):
        return seq
    if pool != 1:
        raise InvalidConfigError(
            "frame_difference and cosine_uniqueness need --pool 1 on token-grid input"
        )
    return flatten_to_features(pool_tokens(seq, PoolConfig(1)))


def _select(seq, args) -> SelectionResult:
    req = SelectionRequest(budget=args.budget, strategy=args.strategy, window=args.window)
    if args.strategy == "uniform":
        return select_uniform(seq.frames, args.budget)
    if args.strategy == "frame_difference":
        return select_frame_difference(_feature_view(seq, args.pool), req)
    if args.strategy == "cosine_uniqueness":
        return select_cosine_uniqueness(_feature_view(seq, args.pool), req)
    r = _score_sequence(seq, args.order, args.pool)
    if args.strategy == "swift_window_argmax":
        return select_swift_window_argmax(r, req)
    return select_swift_local_max(r, req)


def _subset(seq, idx: np.ndarray):
    if isinstance(seq, TokenGridSequence):
        return TokenGridSequence(
            data=seq.data[idx], grid_side=seq.grid_side, layer_index=seq.layer_index
        )
    return FeatureSequence(
        data=seq.data[idx], layer_index=seq.layer_index, source_fps=seq.source_fps
    )


def cmd_score(args) -> int:
    seq = tio.read_trajectory(args.input)
    r = _score_sequence(seq, args.order, args.pool)
    tio.export_residuals_csv(r, None, args.output)
    return 0


def cmd_select(args) -> int:
    seq = tio.read_trajectory(args.input)
    digest = f"{tio.fnv1a64(tio.payload_bytes(seq)):016x}"
    candidates = subsample_candidates(seq.frames, args.candidates)
    if candidates.shape[0] < seq.frames:
        seq = _subset(seq, candidates)
    result = _select(seq, args)
    raw_indices = candidates[result.indices]
    if args.output:
        report = tio.SelectionReport(
            strategy=result.strategy,
            order=result.config_echo.get("order"),
            pool=result.config_echo.get("pool"),
            budget=args.budget,
            indices=[int(i) for i in raw_indices],
            scores=[float(s) for s in result.scores],
            digest=digest,
        )
        tio.write_selection_json(report, args.output)
    print(",".join(str(int(i)) for i in raw_indices))
    return 0


def _parse_events(spec: str) -> list[SurpriseEvent]:
    events = []
    for part in filter(None, (p.strip() for p in spec.split(","))):
        try:
            frame_s, mag_s = part.split(":")
            events.append(SurpriseEvent(int(frame_s), float(mag_s)))
        except ValueError as exc:
            raise InvalidConfigError(
                f"bad event {part!r}, expected frame:magnitude"
            ) from exc
    return events


def _events_sidecar_path(output: str) -> str:
    p = Path(output)
    if p.suffix:
        return str(p.with_suffix(".events.json"))
    return str(p.parent / (p.name + ".events.json"))


def cmd_synth(args) -> int:
    events = _parse_events(args.events)
    seq, truth = gen_synthetic(args.frames, args.dim, args.degree, events, args.seed)
    tio.write_trajectory(seq, args.output)
    doc = {
        "frames": args.frames,
        "dim": args.dim,
        "degree": args.degree,
        "seed": args.seed,
        "events": [
            {"frame_index": ev.frame_index, "jump_magnitude": ev.jump_magnitude}
            for ev in truth
        ],
    }
    with open(_events_sidecar_path(args.output), "w", newline="") as fh:
        fh.write(json.dumps(doc, separators=(",", ":")) + "\n")
    return 0


def _jaccard(a: np.ndarray, b: np.ndarray) -> float:
    sa, sb = set(int(i) for i in a), set(int(i) for i in b)
    union = sa | sb
    return len(sa & sb) / len(union) if union else 1.0


def _indices_digest(indices: np.ndarray) -> str:
    blob = b"".join(struct.pack("<I", int(i)) for i in indices)
    return f"{tio.fnv1a64(blob):016x}"


def _bench_selection(seq, r: ResidualSeries, args, budget: int) -> SelectionResult:
    req = SelectionRequest(budget=budget, strategy=args.strategy, window=args.window)
    if args.strategy == "uniform":
        return select_uniform(seq.frames, budget)
    if args.strategy == "frame_difference":
        return select_frame_difference(_feature_view(seq, 1), req)
    if args.strategy == "cosine_uniqueness":
        return select_cosine_uniqueness(_feature_view(seq, 1), req)
    if args.strategy == "swift_window_argmax":
        return select_swift_window_argmax(r, req)
    return select_swift_local_max(r, req)


def cmd_bench(args) -> int:
    rows = [
        "file,order,pool,budget,strategy,mean_residual,max_residual,"
        "indices_digest,jaccard_vs_uniform"
    ]
    for path in args.input:
        seq = tio.read_trajectory(path)
        t_frames = seq.frames
        grid = seq.grid_side if isinstance(seq, TokenGridSequence) else 0
        pools = sorted({min(s, grid) for s in POOL_SWEEP}) if grid > 0 else [0]
        budgets = sorted({min(k, t_frames) for k in BUDGET_SWEEP})
        for order in ORDER_SWEEP:
            for pool in pools:
                t0 = time.perf_counter()
                r = _score_sequence(seq, order, pool if pool > 0 else 1)
                elapsed_us = (time.perf_counter() - t0) * 1e6
                pool_label = str(pool) if pool > 0 else "pre-pooled"
                print(
                    f"bench {path} order={order} pool={pool_label}: "
                    f"scoring {elapsed_us:.0f} us",
                    file=sys.stderr,
                )
                for budget in budgets:
                    sel = _bench_selection(seq, r, args, budget)
                    uni = select_uniform(t_frames, budget)
                    rows.append(
                        ",".join(
                            [
                                path,
                                str(order),
                                pool_label,
                                str(budget),
                                sel.strategy,
                                tio.format_score(float(r.values.mean())),
                                tio.format_score(float(r.values.max())),
                                _indices_digest(sel.indices),
                                tio.format_score(_jaccard(sel.indices, uni.indices)),
                            ]
                        )
                    )
    with open(args.output, "w", newline="") as fh:
        fh.write("\n".join(rows) + "\n")
    return 0


_COMMANDS = {
    "score": cmd_score,
    "select": cmd_select,
    "synth": cmd_synth,
    "bench": cmd_bench,
}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except FrameSurpriseError as exc:
        print(f"framesurprise: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"framesurprise: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
