"""Seeded synthetic scenes for tests, benchmarks and demonstrations.

Nothing here pretends to be real underwater footage.  The scenes are built so
that the dark-channel prior holds (every colour patch has a near-zero channel
and patches are separated by dark seams), which makes the effect of synthetic
haze and its removal measurable.
"""

from __future__ import annotations

import numpy as np

from .dehaze import synthesize_haze
from .imgcore import ImageBuffer, decode_pnm, encode_pnm

__all__ = [
    "WATER_LIGHT",
    "textured_scene",
    "test_card",
    "quantize",
    "hazy",
    "view_pair",
    "corpus",
    "standard_scene",
]

# blue-green ambient light typical of turbid river water
WATER_LIGHT = (0.35, 0.62, 0.68)


def quantize(img) -> ImageBuffer:
    """Round-trip through 8-bit PNM, as a camera frame would be stored."""
    return decode_pnm(encode_pnm(img))


def _saturated_colour(rng) -> np.ndarray:
    c = rng.uniform(0.25, 1.0, 3)
    c[rng.integers(3)] = rng.uniform(0.0, 0.04)
    return c


def textured_scene(height: int = 240, width: int = 320, seed: int = 0, n_shapes: int = 60) -> ImageBuffer:
    """Random saturated rectangles and discs on a dark, speckled floor."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width]
    img = np.empty((height, width, 3))
    base = _saturated_colour(rng) * 0.5
    img[:] = base
    for _ in range(n_shapes):
        col = _saturated_colour(rng)
        cy, cx = rng.uniform(0, height), rng.uniform(0, width)
        size = rng.uniform(0.03, 0.14) * min(height, width)
        if rng.random() < 0.5:
            mask = (np.abs(yy - cy) < size) & (np.abs(xx - cx) < size * rng.uniform(0.5, 1.5))
            seam = (np.abs(yy - cy) < size + 1.5) & (np.abs(xx - cx) < size * 1.5 + 1.5)
        else:
            r2 = (yy - cy) ** 2 + (xx - cx) ** 2
            mask = r2 < size**2
            seam = r2 < (size + 1.5) ** 2
        img[seam & ~mask] = 0.0
        img[mask] = col
    # fine multiplicative texture so flat patches still carry corners
    speckle = rng.uniform(0.75, 1.0, (height // 4 + 1, width // 4 + 1))
    speckle = np.kron(speckle, np.ones((4, 4)))[:height, :width]
    img *= speckle[:, :, None]
    return ImageBuffer(np.clip(img, 0.0, 1.0))


def test_card(height: int = 96, width: int = 128, cell: int = 8, seed: int = 0) -> ImageBuffer:
    """Saturated colour cells separated by black grid lines.

    Every 15x15 window touches a black line, so the dark channel is exactly
    zero and the estimated transmission is 1 everywhere.  The top-left cell is
    a light gray reference patch, which is where the ambient-light search
    lands when all dark-channel values tie.
    """
    rng = np.random.default_rng(seed)
    img = np.zeros((height, width, 3))
    for r0 in range(0, height, cell):
        for c0 in range(0, width, cell):
            img[r0 : r0 + cell - 1, c0 : c0 + cell - 1] = _saturated_colour(rng)
    img[: cell - 1, : cell - 1] = 0.9
    return ImageBuffer(img)


def hazy(clear, t: float = 0.4, airlight=WATER_LIGHT, quantized: bool = True) -> ImageBuffer:
    """Uniform synthetic haze at transmission ``t``."""
    out = synthesize_haze(clear, t, airlight)
    return quantize(out) if quantized else out


def view_pair(scene: ImageBuffer, height: int, width: int, shift=(7, 11)) -> tuple[ImageBuffer, ImageBuffer]:
    """Two overlapping crops of ``scene``, the second offset by ``shift`` (dy, dx)."""
    dy, dx = shift
    p = scene.pixels
    if p.shape[0] < height + dy or p.shape[1] < width + dx:
        raise ValueError("scene too small for the requested views")
    return ImageBuffer(p[:height, :width]), ImageBuffer(p[dy : dy + height, dx : dx + width])


def standard_scene() -> tuple[ImageBuffer, ImageBuffer]:
    """The fixed two-view textured scene used for feature-matching checks."""
    scene = textured_scene(260, 340, seed=2019, n_shapes=70)
    return view_pair(scene, 240, 320, shift=(7, 11))


def corpus(n: int = 20, height: int = 96, width: int = 128, seed: int = 0) -> list[ImageBuffer]:
    """``n`` distinct clear textured scenes."""
    return [textured_scene(height, width, seed=seed + i, n_shapes=25) for i in range(n)]
