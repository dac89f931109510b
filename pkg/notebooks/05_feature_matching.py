# %% [markdown]
# # Does dehazing help feature matching?
#
# Two overlapping views of one scene, matched clear, under heavy haze, and
# after dehazing both views.

# %%
from uwenhance import synthetic
from uwenhance.dehaze import enhance_dcp
from uwenhance.features import match_count_report

a, b = synthetic.standard_scene()
ha, hb = synthetic.hazy(a, 0.25), synthetic.hazy(b, 0.25)

# %%
for name, pair in [("clear", (a, b)), ("hazy", (ha, hb)), ("dehazed", (enhance_dcp(ha), enhance_dcp(hb)))]:
    rep = match_count_report(*pair)
    print(f"{name:8s} keypoints {rep.keypoints_a:3d}/{rep.keypoints_b:3d}  matches {rep.matches:3d}")

# %%
# true correspondences are offset by the crop shift (dy=7, dx=11)
from uwenhance.features import describe, detect, match

da, db = describe(a, detect(a)), describe(b, detect(b))
pairs = match(da, db)
good = 0
for p in pairs:
    ka, kb = da.keypoints[p.index_a], db.keypoints[p.index_b]
    good += abs(ka.x - kb.x - 11) < 2 and abs(ka.y - kb.y - 7) < 2
print(f"{good} of {len(pairs)} clear matches agree with the known shift")
