"""The on-disk workflow: FTRJ containers, the batch CLI, and reports.

Feature dumps travel as compact float32 "FTRJ" files.  This script writes
one, inspects its layout, then drives the same pipeline through the CLI
(`python -m framesurprise ...`) the way a shell user would.
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from framesurprise import FeatureSequence, fnv1a64, read_trajectory, write_trajectory
from framesurprise.io import HEADER_SIZE, payload_bytes

workdir = Path(tempfile.mkdtemp(prefix="framesurprise-demo-"))
traj = workdir / "clip.ftrj"

rng = np.random.default_rng(0)
features = rng.standard_normal((96, 64)).astype(np.float32)
features[50:] += 4.0  # one abrupt scene change
write_trajectory(FeatureSequence(features, layer_index=0), traj)

raw = traj.read_bytes()
print(f"wrote {traj} ({len(raw)} bytes = {HEADER_SIZE} header + {len(raw) - HEADER_SIZE} payload)")
print(f"magic={raw[:4]!r}  payload digest=fnv1a64:{fnv1a64(raw[HEADER_SIZE:]):016x}")

back = read_trajectory(traj)
assert back.data.tobytes() == payload_bytes(FeatureSequence(features))
print(f"round trip ok: {back.frames} frames x {back.dim} dims, layer={back.layer_index}")


def cli(*argv):
    proc = subprocess.run(
        [sys.executable, "-m", "framesurprise", *argv],
        capture_output=True, text=True, check=True,
    )
    return proc.stdout.strip()


csv_path = workdir / "scores.csv"
report_path = workdir / "selection.json"
cli("score", "--input", str(traj), "--output", str(csv_path))
print(f"\nscore -> {csv_path}; first rows:")
print("\n".join(csv_path.read_text().splitlines()[:4]))

picked = cli(
    "select", "--input", str(traj), "--budget", "8", "--output", str(report_path)
)
print(f"\nselect -> stdout indices: {picked}")
print("selection report:", json.dumps(json.loads(report_path.read_text()), indent=2)[:400])

bench_path = workdir / "bench.csv"
cli("bench", "--input", str(traj), "--output", str(bench_path))
print(f"\nbench -> {bench_path}; rows: {len(bench_path.read_text().splitlines()) - 1}")
print("(per-call scoring times are reported on stderr to keep the CSV deterministic)")
