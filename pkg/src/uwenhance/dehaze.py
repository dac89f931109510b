"""Haze image model and dark-channel-prior restoration (DCP and UDCP).

The observed frame is modelled as ``I = J * t + A * (1 - t)``.  Restoration
estimates the ambient light ``A`` from the dark channel, derives a coarse
transmission ``t``, refines it with a guided filter using the grayscale frame
as guide, and inverts the model.  UDCP runs the same pipeline with the dark
channel taken over green and blue only.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DegenerateAirlight, DimensionMismatch
from .imgcore import ImageBuffer, PixelColor, _require_channels, as_image, box_mean, min_filter, BT601

__all__ = [
    "ChannelSet",
    "DehazeParams",
    "DehazeResult",
    "dark_channel",
    "estimate_airlight",
    "estimate_transmission",
    "guided_filter",
    "recover_radiance",
    "synthesize_haze",
    "dehaze",
    "enhance_dcp",
    "enhance_udcp",
]


class ChannelSet(enum.Enum):
    ALL_RGB = (0, 1, 2)
    GREEN_BLUE = (1, 2)


@dataclass(frozen=True)
class DehazeParams:
    """Tuning knobs for the dark-channel pipeline.

    ``patch_radius`` is the half-width of the square patch (7 gives 15x15),
    ``omega`` the fraction of haze removed, ``t_floor`` the lower bound on
    transmission and ``airlight_fraction`` the share of brightest dark-channel
    pixels considered when picking the ambient light.
    """

    patch_radius: int = 7
    omega: float = 0.95
    t_floor: float = 0.1
    airlight_fraction: float = 0.001
    guided_radius: int = 40
    guided_eps: float = 1e-3
    channel_set: ChannelSet = ChannelSet.ALL_RGB

    def __post_init__(self):
        if not 0 < self.omega <= 1:
            raise ValueError("omega must be in (0, 1]")
        if not 0 < self.t_floor < 1:
            raise ValueError("t_floor must be in (0, 1)")
        if self.patch_radius < 0 or self.guided_radius < 0:
            raise ValueError("radii must be >= 0")
        if not 0 < self.airlight_fraction <= 1:
            raise ValueError("airlight_fraction must be in (0, 1]")
        if self.guided_eps < 0:
            raise ValueError("guided_eps must be >= 0")
        if isinstance(self.channel_set, str):
            object.__setattr__(self, "channel_set", ChannelSet[self.channel_set])


@dataclass(frozen=True)
class DehazeResult:
    output: ImageBuffer
    dark: ImageBuffer
    airlight: PixelColor
    raw_transmission: ImageBuffer
    transmission: ImageBuffer


def _dark(pixels: np.ndarray, params: DehazeParams) -> np.ndarray:
    chans = list(params.channel_set.value)
    return min_filter(pixels[:, :, chans].min(axis=-1), params.patch_radius)


def dark_channel(img, params: DehazeParams = DehazeParams()) -> ImageBuffer:
    """Patch minimum of the per-pixel minimum over the selected channels."""
    img = as_image(img)
    _require_channels(img, 3, "dark_channel")
    return ImageBuffer(_dark(img.pixels, params))


def estimate_airlight(img, dark, params: DehazeParams = DehazeParams()) -> PixelColor:
    """Pick the ambient light among the haziest pixels.

    The top ``ceil(airlight_fraction * N)`` pixels by dark-channel value are
    candidates; the one with the highest BT.601 intensity wins.  Ties at both
    stages go to the lowest row-major index.
    """
    img = as_image(img)
    dark = as_image(dark)
    _require_channels(img, 3, "estimate_airlight")
    if dark.shape[:2] != img.shape[:2]:
        raise DimensionMismatch("dark channel and image differ in size")
    flat = img.pixels.reshape(-1, 3)
    n = max(1, math.ceil(params.airlight_fraction * flat.shape[0]))
    order = np.argsort(-dark.plane.ravel(), kind="stable")[:n]
    # argmax returns the first maximum; keep candidates in index order for the tie-break
    order_by_index = np.sort(order)
    gray = flat[order_by_index] @ BT601
    best = order_by_index[int(np.argmax(gray))]
    r, g, b = np.clip(flat[best], 0.0, 1.0)
    return PixelColor(r, g, b)


def _airlight_array(A) -> np.ndarray:
    if isinstance(A, PixelColor):
        return A.as_array()
    return np.asarray(A, dtype=np.float64).reshape(3)


def estimate_transmission(img, A, params: DehazeParams = DehazeParams()) -> ImageBuffer:
    """``1 - omega * dark(I / A)`` clamped to ``[t_floor, 1]``."""
    img = as_image(img)
    _require_channels(img, 3, "estimate_transmission")
    a = _airlight_array(A)
    chans = list(params.channel_set.value)
    if np.any(a[chans] <= 0):
        rgb = ", ".join(f"{v:.4f}" for v in a)
        raise DegenerateAirlight(f"degenerate airlight ({rgb}): zero channel in {params.channel_set.name}")
    normalized = np.zeros_like(img.pixels)
    normalized[:, :, chans] = img.pixels[:, :, chans] / a[chans]
    t = 1.0 - params.omega * _dark(normalized, params)
    return ImageBuffer(np.clip(t, params.t_floor, 1.0))


def guided_filter(guide, src, radius: int, eps: float) -> ImageBuffer:
    """Edge-preserving filter of ``src`` steered by ``guide`` (both 1-channel).

    Windows where ``var(guide) + eps`` is zero get slope 0, so the output
    there is the local mean of ``src``.
    """
    guide = as_image(guide).plane
    src = as_image(src).plane
    if guide.shape != src.shape:
        raise DimensionMismatch(f"guide {guide.shape} and src {src.shape} differ")
    mean_i = box_mean(guide, radius)
    mean_p = box_mean(src, radius)
    cov_ip = box_mean(guide * src, radius) - mean_i * mean_p
    var_i = box_mean(guide * guide, radius) - mean_i * mean_i
    denom = var_i + eps
    a = np.divide(cov_ip, denom, out=np.zeros_like(cov_ip), where=denom != 0)
    b = mean_p - a * mean_i
    return ImageBuffer(box_mean(a, radius) * guide + box_mean(b, radius))


def recover_radiance(img, t, A, t_floor: float = 0.1) -> ImageBuffer:
    """Invert the haze model on all three channels; output clamped to [0, 1]."""
    img = as_image(img)
    _require_channels(img, 3, "recover_radiance")
    t = as_image(t).plane
    if t.shape != img.shape[:2]:
        raise DimensionMismatch("transmission map and image differ in size")
    a = _airlight_array(A)
    j = (img.pixels - a) / np.maximum(t, t_floor)[:, :, None] + a
    return ImageBuffer(np.clip(j, 0.0, 1.0))


def synthesize_haze(clear, t, A) -> ImageBuffer:
    """Forward haze model ``I = J t + A (1 - t)``; ``t`` may be a scalar or a map."""
    clear = as_image(clear)
    _require_channels(clear, 3, "synthesize_haze")
    if np.isscalar(t):
        tm = np.full(clear.shape[:2], float(t))
    else:
        tm = as_image(t).plane
        if tm.shape != clear.shape[:2]:
            raise DimensionMismatch("transmission map and image differ in size")
    if np.any(tm <= 0) or np.any(tm > 1):
        raise ValueError("transmission must lie in (0, 1]")
    a = _airlight_array(A)
    tm = tm[:, :, None]
    return ImageBuffer(clear.pixels * tm + a * (1.0 - tm))


def dehaze(img, params: DehazeParams = DehazeParams()) -> DehazeResult:
    """Run the full restoration pipeline and keep every intermediate."""
    img = as_image(img)
    _require_channels(img, 3, "dehaze")
    dark = dark_channel(img, params)
    A = estimate_airlight(img, dark, params)
    raw_t = estimate_transmission(img, A, params)
    gray = ImageBuffer(img.pixels @ BT601)
    refined = guided_filter(gray, raw_t, params.guided_radius, params.guided_eps)
    t = ImageBuffer(np.clip(refined.plane, params.t_floor, 1.0))
    out = recover_radiance(img, t, A, params.t_floor)
    return DehazeResult(output=out, dark=dark, airlight=A, raw_transmission=raw_t, transmission=t)


def enhance_dcp(img, params: DehazeParams = DehazeParams()) -> ImageBuffer:
    return dehaze(img, replace(params, channel_set=ChannelSet.ALL_RGB)).output


def enhance_udcp(img, params: DehazeParams = DehazeParams()) -> ImageBuffer:
    """Same as :func:`enhance_dcp` but the dark channel ignores red."""
    return dehaze(img, replace(params, channel_set=ChannelSet.GREEN_BLUE)).output
