# %% [markdown]
# # Fitting UCIQE weights to opinion scores
#
# The real rating data is not shipped, so we simulate raters whose scores
# follow the default weights plus noise, and check what the fit recovers.

# %%
import numpy as np

from uwenhance.calib import RatingSample, fit_mlr, holdout_eval
from uwenhance.quality import DEFAULT_COEFFICIENTS

rng = np.random.default_rng(0)
n = 155
feats = np.column_stack([rng.uniform(5, 15, n), rng.uniform(20, 60, n), rng.uniform(0, 1, n)])
scores = np.clip(feats @ [DEFAULT_COEFFICIENTS.c1, DEFAULT_COEFFICIENTS.c2, DEFAULT_COEFFICIENTS.c3]
                 + rng.normal(0, 0.15, n), 1, 5)
samples = [RatingSample(*f, s) for f, s in zip(feats, scores)]

# %%
fit = fit_mlr(samples)
print("fitted:", fit.coeffs)
print("r^2 on all rows: %.4f" % fit.r_squared)

# %%
res = holdout_eval(samples, split_fraction=0.2, seed=1)
print("held-out r^2: %.4f over %d rows" % (res.r_squared, len(res.pairs)))
for actual, predicted in res.pairs[:5]:
    print(f"  rated {actual:.2f}  predicted {predicted:.2f}")
