"""How temporal-surprise scoring works, on a trajectory we fully control.

Builds a smooth synthetic feature trajectory with two known scene jumps,
scores every frame by its prediction residual, and prints the score curve
so the "surprise spikes" at the jumps are visible.
"""

import numpy as np

from framesurprise import (
    SurpriseEvent,
    SurpriseParams,
    TaylorConfig,
    gen_synthetic,
    residual_series,
    surprise,
)

# A 48-frame, 16-dim trajectory: linear drift plus two persistent jumps.
events = [SurpriseEvent(frame_index=15, jump_magnitude=6.0),
          SurpriseEvent(frame_index=33, jump_magnitude=9.0)]
seq, truth = gen_synthetic(frames=48, dim=16, base_degree=1, events=events, seed=7)

# Score with the default expansion order 3.  Each frame is predicted from
# its four predecessors; the residual is the L2 error of that prediction.
r = residual_series(seq, TaylorConfig(order=3))

print("frame  effective_order  residual   bar")
peak = r.values.max()
for t in range(seq.frames):
    bar = "#" * int(round(40 * r.values[t] / peak)) if peak > 0 else ""
    marker = "  <-- injected jump" if any(ev.frame_index == t for ev in truth) else ""
    print(f"{t:5d}  {r.order_used[t]:15d}  {r.values[t]:8.3f}   {bar}{marker}")

# The residual maps monotonically to Gaussian-model self-information, so
# rankings are identical; sigma only sets the scale.
params = SurpriseParams(sigma=2.0)
top = int(np.argmax(r.values))
print(f"\nmost surprising frame: {top} "
      f"(residual {r.values[top]:.3f}, self-information {surprise(r.values[top], params):.3f})")
print(f"injected jumps were at frames {[ev.frame_index for ev in truth]}; "
      "the spike trails each jump by a frame or two while the predictor's "
      "history window crosses the discontinuity.")
