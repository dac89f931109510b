# %% [markdown]
# # The quality gate
#
# Frames already above the threshold pass through untouched; the rest are
# dehazed until they clear it or the iteration budget runs out.  The default
# threshold is calibrated here on the synthetic corpus.

# %%
from uwenhance import synthetic
from uwenhance.gate import DEFAULT_TAU, GateConfig, calibrate_tau, run_gate
from uwenhance.quality import uciqe

corpus = synthetic.corpus(20)
hazed = [synthetic.hazy(c, 0.4) for c in corpus]
rows = [(uciqe(c).uciqe, "clear") for c in corpus] + [(uciqe(h).uciqe, "hazy") for h in hazed]
tau = calibrate_tau(rows)
print(f"calibrated tau {tau:.4f} (shipped default {DEFAULT_TAU})")

# %%
config = GateConfig(tau=tau, max_iterations=3)
for i in range(5):
    out = run_gate(hazed[i], config)
    trace = " -> ".join(f"{s:.2f}" for s in out.trace)
    print(f"frame {i}: {out.verdict.value:17s} after {out.iterations_used} pass(es): {trace}")

# %%
out = run_gate(corpus[0], config)
print("clear frame:", out.verdict.value, out.final is corpus[0])
