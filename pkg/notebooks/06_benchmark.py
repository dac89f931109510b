# %% [markdown]
# # Timing the enhancer
#
# Per-frame DCP time on VGA frames, I/O excluded, as the bench command does.

# %%
import time

import numpy as np

from uwenhance import synthetic
from uwenhance.dehaze import enhance_dcp

frames = [synthetic.hazy(synthetic.textured_scene(480, 640, seed=s), 0.4) for s in range(3)]
durations = []
for _ in range(3):
    for f in frames:
        t0 = time.perf_counter()
        enhance_dcp(f)
        durations.append(time.perf_counter() - t0)

d = np.array(durations)
print(f"{len(d)} runs: mean {d.mean() * 1000:.1f} ms, std {d.std() * 1000:.1f} ms")
