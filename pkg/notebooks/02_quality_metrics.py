# %% [markdown]
# # Quality metrics
#
# UCIQE needs no reference; PSNR and SSIM compare against the clear frame.

# %%
from uwenhance import synthetic
from uwenhance.dehaze import enhance_dcp, enhance_udcp
from uwenhance.quality import adversarial_loss, cycle_loss, score, ssim_loss

clear = synthetic.textured_scene(96, 128, seed=11)
hazy = synthetic.hazy(clear, 0.4)

# %%
for name, img in [("clear", clear), ("hazy", hazy), ("dcp", enhance_dcp(hazy)), ("udcp", enhance_udcp(hazy))]:
    r = score(img, clear)
    print(f"{name:6s} uciqe {r.uciqe:6.3f}  sigma_c {r.sigma_c:6.2f}  con_l {r.con_l:6.2f}  "
          f"mu_s {r.mu_s:.3f}  psnr {r.psnr:6.2f}  ssim {r.ssim:.3f}")

# %%
# the training losses are plain functions of discriminator scores and images
print("adversarial, undecided discriminator:", adversarial_loss([0.5] * 4, [0.5] * 4))
print("cycle loss of a perfect round trip:  ", cycle_loss(clear, clear, hazy, hazy))
print("ssim loss hazy vs clear:             ", ssim_loss(hazy, clear))
