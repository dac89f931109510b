"""Image container, bit-exact PNM I/O, colour conversions and window filters.

Samples are float64 in the nominal range [0, 1]; 8-bit data is mapped with
``value / 255`` on decode and ``round(sample * 255)`` on encode.  Window
operations use shrink-window normalization: a window that overhangs the image
border is clipped and averaged over the pixels it still covers.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .errors import (
    ChannelMismatch,
    DimensionMismatch,
    InvalidWindow,
    TooSmall,
    TruncatedPayload,
    UnsupportedFormat,
)

__all__ = [
    "ImageBuffer",
    "PixelColor",
    "as_image",
    "decode_pnm",
    "encode_pnm",
    "read_pnm",
    "write_pnm",
    "to_grayscale",
    "rgb_to_lab",
    "rgb_to_hsv",
    "box_filter",
    "gaussian_window",
    "downsample",
    "min_filter",
]

BT601 = np.array([0.299, 0.587, 0.114])

# sRGB (D65) -> XYZ
_SRGB_TO_XYZ = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
# white point taken from the matrix itself so that (1,1,1) lands exactly on a=b=0
_WHITE = _SRGB_TO_XYZ.sum(axis=1)


@dataclass(frozen=True, eq=False)
class ImageBuffer:
    """A ``height x width x channels`` raster of finite float64 samples.

    The array is copied on construction and marked read-only, so buffers can
    be shared freely between threads.
    """

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.array(self.pixels, dtype=np.float64, copy=True)
        if arr.ndim == 2:
            arr = arr[:, :, None]
        if arr.ndim != 3 or arr.shape[2] not in (1, 3):
            raise ChannelMismatch(f"expected HxW, HxWx1 or HxWx3 array, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise TooSmall("image must be at least 1x1")
        if not np.all(np.isfinite(arr)):
            raise ValueError("image samples must be finite")
        arr.flags.writeable = False
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def channels(self) -> int:
        return self.pixels.shape[2]

    @property
    def shape(self) -> tuple[int, int, int]:
        return self.pixels.shape

    @property
    def plane(self) -> np.ndarray:
        """The single channel of a grayscale image as an ``HxW`` array."""
        if self.channels != 1:
            raise ChannelMismatch("plane is only defined for 1-channel images")
        return self.pixels[:, :, 0]

    def __eq__(self, other):
        if not isinstance(other, ImageBuffer):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self.pixels, other.pixels)

    def __repr__(self):
        return f"ImageBuffer({self.width}x{self.height}x{self.channels})"


@dataclass(frozen=True)
class PixelColor:
    r: float
    g: float
    b: float

    def __post_init__(self):
        for name in ("r", "g", "b"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"colour component {name}={v} outside [0, 1]")
            object.__setattr__(self, name, v)

    def as_array(self) -> np.ndarray:
        return np.array([self.r, self.g, self.b])


def as_image(img) -> ImageBuffer:
    """Wrap an array as an :class:`ImageBuffer`; buffers pass through."""
    if isinstance(img, ImageBuffer):
        return img
    return ImageBuffer(np.asarray(img))


def _require_channels(img: ImageBuffer, n: int, what: str):
    if img.channels != n:
        raise ChannelMismatch(f"{what} needs a {n}-channel image, got {img.channels}")


def require_same_shape(a: ImageBuffer, b: ImageBuffer):
    if a.shape != b.shape:
        raise DimensionMismatch(f"shape mismatch: {a.shape} vs {b.shape}")


# ---------------------------------------------------------------------------
# PNM

_HEADER = re.compile(rb"\A(P[56])\s+(\d+)\s+(\d+)\s+(\d+)\s")


def decode_pnm(data: bytes) -> ImageBuffer:
    """Decode binary P6 (RGB) or P5 (gray) data with maxval 255."""
    m = _HEADER.match(data)
    if m is None:
        raise UnsupportedFormat("malformed PNM header (expected binary P5/P6)")
    magic, w, h, maxval = m.group(1), int(m.group(2)), int(m.group(3)), int(m.group(4))
    if maxval != 255:
        raise UnsupportedFormat(f"maxval {maxval} unsupported, only 255")
    if w < 1 or h < 1:
        raise UnsupportedFormat(f"invalid dimensions {w}x{h}")
    channels = 3 if magic == b"P6" else 1
    need = w * h * channels
    payload = data[m.end() :]
    if len(payload) < need:
        raise TruncatedPayload(f"payload has {len(payload)} bytes, header requires {need}")
    raw = np.frombuffer(payload, dtype=np.uint8, count=need)
    return ImageBuffer(raw.reshape(h, w, channels) / 255.0)


def encode_pnm(img) -> bytes:
    """Encode as binary P5/P6, maxval 255, using ``round(sample*255)`` clamped."""
    img = as_image(img)
    q = np.clip(np.rint(img.pixels * 255.0), 0, 255).astype(np.uint8)
    magic = b"P6" if img.channels == 3 else b"P5"
    header = b"%s\n%d %d\n255\n" % (magic, img.width, img.height)
    return header + q.tobytes()


def read_pnm(path) -> ImageBuffer:
    return decode_pnm(Path(path).read_bytes())


def write_pnm(path, img) -> None:
    Path(path).write_bytes(encode_pnm(img))


# ---------------------------------------------------------------------------
# colour


def to_grayscale(img) -> ImageBuffer:
    """BT.601 luma ``0.299 R + 0.587 G + 0.114 B``."""
    img = as_image(img)
    _require_channels(img, 3, "to_grayscale")
    return ImageBuffer(img.pixels @ BT601)


def _srgb_to_linear(c: np.ndarray) -> np.ndarray:
    return np.where(c <= 0.04045, c / 12.92, ((c + 0.055) / 1.055) ** 2.4)


def rgb_to_lab(img) -> ImageBuffer:
    """sRGB in [0, 1] to CIE L*a*b* (D65); L in [0, 100]."""
    img = as_image(img)
    _require_channels(img, 3, "rgb_to_lab")
    lin = _srgb_to_linear(np.clip(img.pixels, 0.0, 1.0))
    xyz = (lin @ _SRGB_TO_XYZ.T) / _WHITE
    eps = (6.0 / 29.0) ** 3
    f = np.where(xyz > eps, np.cbrt(xyz), xyz / (3 * (6.0 / 29.0) ** 2) + 4.0 / 29.0)
    L = 116.0 * f[..., 1] - 16.0
    a = 500.0 * (f[..., 0] - f[..., 1])
    b = 200.0 * (f[..., 1] - f[..., 2])
    return ImageBuffer(np.stack([L, a, b], axis=-1))


def rgb_to_hsv(img) -> ImageBuffer:
    """Hexcone HSV: H in degrees [0, 360), S and V in [0, 1]; H = 0 when S = 0."""
    img = as_image(img)
    _require_channels(img, 3, "rgb_to_hsv")
    p = img.pixels
    r, g, b = p[..., 0], p[..., 1], p[..., 2]
    v = p.max(axis=-1)
    delta = v - p.min(axis=-1)
    chromatic = delta > 0
    s = np.divide(delta, v, out=np.zeros_like(v), where=v > 0)
    safe = np.where(chromatic, delta, 1.0)
    h = np.where(
        v == r,
        ((g - b) / safe) % 6.0,
        np.where(v == g, (b - r) / safe + 2.0, (r - g) / safe + 4.0),
    )
    h = np.where(chromatic, h * 60.0, 0.0) % 360.0
    return ImageBuffer(np.stack([h, s, v], axis=-1))


# ---------------------------------------------------------------------------
# windows and filters


def _window_sum_1d(a: np.ndarray, r: int, axis: int) -> np.ndarray:
    # running sums over [i-r, i+r] clipped at the ends
    n = a.shape[axis]
    c = np.cumsum(a, axis=axis)
    pad_shape = list(a.shape)
    pad_shape[axis] = 1
    c = np.concatenate([np.zeros(pad_shape), c], axis=axis)
    idx = np.arange(n)
    hi = np.minimum(idx + r + 1, n)
    lo = np.maximum(idx - r, 0)
    return np.take(c, hi, axis=axis) - np.take(c, lo, axis=axis)


def _window_count_1d(n: int, r: int) -> np.ndarray:
    idx = np.arange(n)
    return (np.minimum(idx + r + 1, n) - np.maximum(idx - r, 0)).astype(np.float64)


def box_mean(a: np.ndarray, radius: int) -> np.ndarray:
    """Array-level box mean used internally by the filters."""
    if radius < 0:
        raise InvalidWindow("radius must be >= 0")
    if radius == 0:
        return np.array(a, dtype=np.float64)
    h, w = a.shape
    s = _window_sum_1d(_window_sum_1d(np.asarray(a, dtype=np.float64), radius, 0), radius, 1)
    n = np.outer(_window_count_1d(h, radius), _window_count_1d(w, radius))
    return s / n


def box_filter(img, radius: int) -> ImageBuffer:
    """Mean over the ``(2r+1)^2`` window clipped to the image bounds."""
    img = as_image(img)
    _require_channels(img, 1, "box_filter")
    return ImageBuffer(box_mean(img.plane, int(radius)))


def min_filter(a: np.ndarray, radius: int) -> np.ndarray:
    """Square minimum filter over the clipped ``(2r+1)^2`` window.

    Edge replication gives the same result as clipping, since replicated
    samples already lie inside the clipped window.
    """
    if radius < 0:
        raise InvalidWindow("radius must be >= 0")
    if radius == 0:
        return np.array(a, dtype=np.float64)
    k = 2 * radius + 1
    p = np.pad(a, radius, mode="edge")
    rows = sliding_window_view(p, k, axis=0).min(axis=-1)
    return sliding_window_view(rows, k, axis=1).min(axis=-1)


def gaussian_kernel_1d(size: int, sigma: float) -> np.ndarray:
    if size < 1 or size % 2 == 0:
        raise InvalidWindow(f"window size must be a positive odd integer, got {size}")
    if not sigma > 0:
        raise InvalidWindow("sigma must be > 0")
    x = np.arange(size) - size // 2
    g = np.exp(-(x * x) / (2.0 * sigma * sigma))
    return g / g.sum()


def gaussian_window(size: int, sigma: float) -> np.ndarray:
    """Normalized 2-D Gaussian weights of shape ``(size, size)``."""
    g = gaussian_kernel_1d(size, sigma)
    w = np.outer(g, g)
    return w / w.sum()


def downsample(img, scale: float = 1.2) -> ImageBuffer:
    """Shrink by ``scale`` with bilinear sampling at output pixel centres.

    Output pixel ``i`` samples input coordinate ``(i + 0.5) * scale - 0.5``,
    clamped to the image; the output has ``floor(dim / scale)`` pixels per axis.
    """
    img = as_image(img)
    if scale <= 0:
        raise ValueError("scale must be positive")
    out_h = math.floor(img.height / scale)
    out_w = math.floor(img.width / scale)
    if img.height < 2 or img.width < 2 or out_h < 1 or out_w < 1:
        raise TooSmall(f"cannot downsample {img.width}x{img.height} by {scale}")

    def taps(n_out, n_in):
        pos = np.clip((np.arange(n_out) + 0.5) * scale - 0.5, 0.0, n_in - 1)
        i0 = np.floor(pos).astype(int)
        i1 = np.minimum(i0 + 1, n_in - 1)
        return i0, i1, pos - i0

    y0, y1, fy = taps(out_h, img.height)
    x0, x1, fx = taps(out_w, img.width)
    p = img.pixels
    fx = fx[None, :, None]
    top = p[y0][:, x0] * (1 - fx) + p[y0][:, x1] * fx
    bot = p[y1][:, x0] * (1 - fx) + p[y1][:, x1] * fx
    fy = fy[:, None, None]
    return ImageBuffer(top * (1 - fy) + bot * fy)
