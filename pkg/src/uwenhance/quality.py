"""Image quality functionals: UCIQE, MSE/PSNR, windowed SSIM and GAN losses.

Full-reference metrics work in 8-bit units (samples scaled by 255), so PSNR
uses a peak of 255 and the SSIM stabilizers are ``(0.01*255)^2`` and
``(0.03*255)^2``.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np
from scipy.ndimage import correlate1d

from .errors import InsufficientSamples
from .imgcore import (
    ImageBuffer,
    _require_channels,
    as_image,
    gaussian_kernel_1d,
    require_same_shape,
    rgb_to_hsv,
    rgb_to_lab,
    to_grayscale,
)

__all__ = [
    "UciqeCoefficients",
    "DEFAULT_COEFFICIENTS",
    "QualityReport",
    "mse",
    "psnr",
    "ssim",
    "ssim_loss",
    "adversarial_loss",
    "cycle_loss",
    "uciqe",
    "uciqe_components",
    "score",
]

MAX_I = 255.0
SSIM_C1 = (0.01 * MAX_I) ** 2
SSIM_C2 = (0.03 * MAX_I) ** 2
SSIM_WINDOW = 11
SSIM_SIGMA = 1.5


@dataclass(frozen=True)
class UciqeCoefficients:
    c1: float = 0.1654
    c2: float = 0.0324
    c3: float = -0.1365

    def __post_init__(self):
        for name in ("c1", "c2", "c3"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise ValueError(f"coefficient {name} must be finite")
            object.__setattr__(self, name, v)

    def combine(self, sigma_c: float, con_l: float, mu_s: float) -> float:
        return self.c1 * sigma_c + self.c2 * con_l + self.c3 * mu_s

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "UciqeCoefficients":
        return cls(float(d["c1"]), float(d["c2"]), float(d["c3"]))


# default weights, fitted by regression on human-rated underwater frames
DEFAULT_COEFFICIENTS = UciqeCoefficients(0.1654, 0.0324, -0.1365)


@dataclass(frozen=True)
class QualityReport:
    sigma_c: float
    con_l: float
    mu_s: float
    uciqe: float
    psnr: Optional[float] = None
    ssim: Optional[float] = None

    def to_dict(self) -> dict:
        psnr = self.psnr
        if psnr is not None and math.isinf(psnr):
            psnr = "inf"
        return {
            "sigma_c": self.sigma_c,
            "con_l": self.con_l,
            "mu_s": self.mu_s,
            "uciqe": self.uciqe,
            "psnr": psnr,
            "ssim": self.ssim,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QualityReport":
        psnr = d.get("psnr")
        if psnr == "inf":
            psnr = math.inf
        return cls(d["sigma_c"], d["con_l"], d["mu_s"], d["uciqe"], psnr, d.get("ssim"))


# ---------------------------------------------------------------------------
# full-reference


def mse(a, b) -> float:
    """Mean squared difference in 8-bit units over every sample."""
    a, b = as_image(a), as_image(b)
    require_same_shape(a, b)
    d = (a.pixels - b.pixels) * MAX_I
    return float(np.mean(d * d))


def psnr(a, b) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical images."""
    err = mse(a, b)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(MAX_I * MAX_I / err)


def _weighted_mean(x: np.ndarray, g: np.ndarray, norm: np.ndarray) -> np.ndarray:
    s = correlate1d(correlate1d(x, g, axis=0, mode="constant"), g, axis=1, mode="constant")
    return s / norm


def ssim(a, b) -> tuple[float, ImageBuffer]:
    """Structural similarity with an 11x11 Gaussian window (sigma 1.5).

    Returns the mean over all pixels and the per-pixel map.  Near the border
    the window is clipped and its weights renormalized, so every pixel has an
    SSIM value.  Three-channel inputs are compared on BT.601 luma.
    """
    a, b = as_image(a), as_image(b)
    require_same_shape(a, b)
    if a.channels == 3:
        a, b = to_grayscale(a), to_grayscale(b)
    x = a.plane * MAX_I
    y = b.plane * MAX_I
    g = gaussian_kernel_1d(SSIM_WINDOW, SSIM_SIGMA)
    norm = _weighted_mean(np.ones_like(x), g, 1.0)
    mu_x = _weighted_mean(x, g, norm)
    mu_y = _weighted_mean(y, g, norm)
    var_x = _weighted_mean(x * x, g, norm) - mu_x * mu_x
    var_y = _weighted_mean(y * y, g, norm) - mu_y * mu_y
    cov = _weighted_mean(x * y, g, norm) - mu_x * mu_y
    lum = (2 * mu_x * mu_y + SSIM_C1) / (mu_x * mu_x + mu_y * mu_y + SSIM_C1)
    struct = (2 * cov + SSIM_C2) / (var_x + var_y + SSIM_C2)
    smap = np.clip(lum * struct, -1.0, 1.0)
    return float(smap.mean()), ImageBuffer(smap)


def ssim_loss(x, gx) -> float:
    """``1 - mean SSIM``; ranges over [0, 2]."""
    return 1.0 - ssim(x, gx)[0]


# ---------------------------------------------------------------------------
# GAN objectives on caller-supplied scores and reconstructions

_EPS = np.finfo(np.float64).eps


def adversarial_loss(d_real: Sequence[float], d_fake: Sequence[float]) -> float:
    """Empirical ``E[log D(y)] + E[log(1 - D(G(x)))]``.

    Scores are clamped to ``[eps, 1 - eps]`` so the logs stay finite.
    """
    real = np.asarray(d_real, dtype=np.float64).ravel()
    fake = np.asarray(d_fake, dtype=np.float64).ravel()
    if real.size == 0 or fake.size == 0:
        raise InsufficientSamples("adversarial loss needs at least one real and one fake score")
    real = np.clip(real, _EPS, 1.0 - _EPS)
    fake = np.clip(fake, _EPS, 1.0 - _EPS)
    return float(np.mean(np.log(real)) + np.mean(np.log1p(-fake)))


def cycle_loss(x, fgx, y, gfy) -> float:
    """Mean absolute reconstruction error of both cycles, summed."""
    x, fgx, y, gfy = (as_image(v) for v in (x, fgx, y, gfy))
    require_same_shape(x, fgx)
    require_same_shape(y, gfy)
    return float(np.mean(np.abs(fgx.pixels - x.pixels)) + np.mean(np.abs(gfy.pixels - y.pixels)))


# ---------------------------------------------------------------------------
# UCIQE


def uciqe_components(img) -> tuple[float, float, float]:
    """Chroma spread, luminance contrast and mean saturation of an RGB frame.

    * chroma spread: population std of ``sqrt(a^2 + b^2)`` in CIELab
    * contrast: mean of the brightest ``ceil(1%)`` of L minus mean of the darkest
    * saturation: mean HSV saturation
    """
    img = as_image(img)
    _require_channels(img, 3, "uciqe")
    lab = rgb_to_lab(img).pixels.reshape(-1, 3)
    chroma = np.hypot(lab[:, 1], lab[:, 2])
    sigma_c = float(np.std(chroma))
    L = np.sort(lab[:, 0])
    k = math.ceil(0.01 * L.size)
    con_l = float(L[-k:].mean() - L[:k].mean())
    mu_s = float(rgb_to_hsv(img).pixels[..., 1].mean())
    return sigma_c, con_l, mu_s


def uciqe(img, coeffs: UciqeCoefficients = DEFAULT_COEFFICIENTS) -> QualityReport:
    sigma_c, con_l, mu_s = uciqe_components(img)
    return QualityReport(sigma_c, con_l, mu_s, coeffs.combine(sigma_c, con_l, mu_s))


def score(img, ref=None, coeffs: UciqeCoefficients = DEFAULT_COEFFICIENTS) -> QualityReport:
    """UCIQE report, plus PSNR and SSIM against ``ref`` when one is given."""
    rep = uciqe(img, coeffs)
    if ref is None:
        return rep
    return QualityReport(
        rep.sigma_c, rep.con_l, rep.mu_s, rep.uciqe, psnr=psnr(img, ref), ssim=ssim(img, ref)[0]
    )
