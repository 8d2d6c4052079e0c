"""Spatial pooling granularity and its effect on the surprise signal.

A 14x14 token grid (the typical vision-encoder layout) is aggregated into
S x S region grids for S in {1, 2, 4, 7, 14} and scored at each setting.
Texture noise and camera jitter perturb every token independently at every
frame; a scene change moves all tokens coherently.  Region means average
the independent jitter away (by roughly 1/sqrt(tokens per region)) while
the coherent change survives pooling untouched, so coarse grids separate
the two best.
"""

import numpy as np

from framesurprise import PoolConfig, TaylorConfig, TokenGridSequence, pool_tokens, residual_series

rng = np.random.default_rng(11)
frames, g, d = 64, 14, 32
tokens = g * g

# Smooth per-token drift + dense independent jitter on every token.
t_axis = np.linspace(0, 1, frames)[:, None, None]
base = t_axis * rng.standard_normal((1, tokens, d))
jitter = 0.25 * rng.standard_normal((frames, tokens, d))
# Coherent scene change at frame 40: one shared offset for every token.
shift = np.zeros((frames, 1, 1))
shift[40:] = 1.0
data = base + jitter + shift * (2.0 * rng.standard_normal((1, 1, d)))
grid = TokenGridSequence(data=data, grid_side=g)

print(f"{'S':>3} {'regions':>8} {'spike@40..41':>13} {'noise floor':>12} {'spike/floor':>12}")
for s in (1, 2, 4, 7, 14):
    regions = pool_tokens(grid, PoolConfig(s))
    r = residual_series(regions, TaylorConfig(order=3))
    spike = r.values[40:42].max()
    floor = np.median(r.values[8:38])
    print(f"{s:3d} {s * s:8d} {spike:13.3f} {floor:12.3f} {spike / floor:12.1f}")

print(
    "\nEvery setting sees the scene change, but finer grids drown it in "
    "per-token jitter: with one token per region nothing gets averaged "
    "away, while the global mean (S=1) cancels independent noise and keeps "
    "the coherent change, giving the cleanest spike-to-floor ratio."
)
