"""Oriented multi-scale FAST corners, rotated 256-bit binary descriptors and
Hamming matching.

This is a small ORB-style front end used to measure how many correspondences
survive between two views, before and after enhancement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._pattern import PAIRS
from .errors import TooSmall
from .imgcore import ImageBuffer, as_image, box_mean, downsample, to_grayscale

__all__ = [
    "DetectConfig",
    "Keypoint",
    "MatchPair",
    "DescriptorSet",
    "MatchReport",
    "detect",
    "describe",
    "match",
    "hamming",
    "hamming_matrix",
    "intensity_centroid_angle",
    "match_count_report",
]

# Bresenham circle of radius 3, clockwise from the top
CIRCLE = (
    (0, -3), (1, -3), (2, -2), (3, -1), (3, 0), (3, 1), (2, 2), (1, 3),
    (0, 3), (-1, 3), (-2, 2), (-3, 1), (-3, 0), (-3, -1), (-2, -2), (-1, -3),
)  # fmt: skip
ARC_LENGTH = 9
PATCH_RADIUS = 15
# keypoints keep the full orientation patch inside their level
BORDER = PATCH_RADIUS
MIN_SIZE = 32
SMOOTH_RADIUS = 2

_PATTERN = np.array(PAIRS, dtype=np.float64)
_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.int32)

_dy, _dx = np.mgrid[-PATCH_RADIUS : PATCH_RADIUS + 1, -PATCH_RADIUS : PATCH_RADIUS + 1]
_DISK = _dx * _dx + _dy * _dy <= PATCH_RADIUS * PATCH_RADIUS
DISK_DX = _dx[_DISK]
DISK_DY = _dy[_DISK]


@dataclass(frozen=True)
class DetectConfig:
    n_features: int = 500
    fast_threshold: float = 0.08
    levels: int = 8
    scale_factor: float = 1.2

    def __post_init__(self):
        if self.n_features < 1 or self.levels < 1:
            raise ValueError("n_features and levels must be >= 1")
        if self.scale_factor <= 1.0:
            raise ValueError("scale_factor must be > 1")
        if self.fast_threshold < 0:
            raise ValueError("fast_threshold must be >= 0")


@dataclass(frozen=True)
class Keypoint:
    """A corner located in level-0 coordinates.

    ``col``/``row`` are the integer pixel position inside the pyramid level,
    ``scale`` the level's shrink factor relative to level 0.
    """

    x: float
    y: float
    level: int
    orientation: float
    response: float
    col: int = 0
    row: int = 0
    scale: float = 1.0


@dataclass(frozen=True)
class MatchPair:
    index_a: int
    index_b: int
    distance: int


@dataclass
class DescriptorSet:
    """Packed descriptors, one row of 32 bytes per described keypoint.

    ``keypoints`` lists the described keypoints in row order, ``skipped`` the
    input indices that were too close to their level's border.
    """

    bits: np.ndarray
    keypoints: list
    skipped: list = field(default_factory=list)

    def __len__(self):
        return self.bits.shape[0]


@dataclass
class MatchReport:
    keypoints_a: int
    keypoints_b: int
    matches: int
    distances: list
    described_a: int = 0
    described_b: int = 0
    pairs: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "keypoints_a": self.keypoints_a,
            "keypoints_b": self.keypoints_b,
            "described_a": self.described_a,
            "described_b": self.described_b,
            "matches": self.matches,
            "distances": list(self.distances),
        }


# ---------------------------------------------------------------------------
# detection


def _gray_plane(img) -> np.ndarray:
    img = as_image(img)
    if img.channels == 3:
        img = to_grayscale(img)
    return img.plane


def _pyramid(plane: np.ndarray, levels: int, scale_factor: float) -> list[tuple[np.ndarray, float]]:
    out = [(plane, 1.0)]
    base = ImageBuffer(plane)
    for lvl in range(1, levels):
        s = scale_factor**lvl
        if math.floor(plane.shape[0] / s) < 2 * BORDER + 1 or math.floor(plane.shape[1] / s) < 2 * BORDER + 1:
            break
        out.append((downsample(base, s).plane, s))
    return out


def segment_test(plane: np.ndarray, threshold: float) -> np.ndarray:
    """FAST-9 response for every pixel at least ``BORDER`` from the edge.

    A pixel is a corner when 9 or more contiguous circle pixels are all
    brighter than ``centre + threshold`` or all darker than
    ``centre - threshold``; its response is the sum of absolute differences
    along that arc.  Non-corners and border pixels score 0.
    """
    h, w = plane.shape
    resp = np.zeros((h, w))
    if h < 2 * BORDER + 1 or w < 2 * BORDER + 1:
        return resp
    center = plane[BORDER : h - BORDER, BORDER : w - BORDER]
    diffs = np.stack(
        [plane[BORDER + dy : h - BORDER + dy, BORDER + dx : w - BORDER + dx] - center for dx, dy in CIRCLE]
    )
    absd = np.abs(diffs)
    best = np.zeros(center.shape)
    for mask in (diffs > threshold, diffs < -threshold):
        run = np.zeros(center.shape)
        acc = np.zeros(center.shape)
        for k in range(2 * len(CIRCLE)):
            m = mask[k % 16]
            run = (run + 1) * m
            acc = (acc + absd[k % 16]) * m
            best = np.maximum(best, np.where(run >= ARC_LENGTH, acc, 0.0))
        full = mask.all(axis=0)
        best = np.where(full, absd.sum(axis=0), best)
    resp[BORDER : h - BORDER, BORDER : w - BORDER] = best
    return resp


def _nonmax(resp: np.ndarray) -> np.ndarray:
    p = np.pad(resp, 1, mode="constant")
    h, w = resp.shape
    neigh = np.max(
        np.stack([p[1 + dy : 1 + dy + h, 1 + dx : 1 + dx + w] for dy in (-1, 0, 1) for dx in (-1, 0, 1)]), axis=0
    )
    return (resp > 0) & (resp >= neigh)


def intensity_centroid_angle(plane: np.ndarray, col: int, row: int) -> float:
    """Angle of the intensity centroid over the radius-15 disk, in [0, 2*pi)."""
    vals = plane[row + DISK_DY, col + DISK_DX]
    m10 = float(np.sum(DISK_DX * vals))
    m01 = float(np.sum(DISK_DY * vals))
    return math.atan2(m01, m10) % (2 * math.pi)


def detect(img, config: DetectConfig = DetectConfig()) -> list[Keypoint]:
    """Multi-scale oriented FAST corners, strongest ``n_features`` overall.

    Returned in level-major, then row-major order.
    """
    plane = _gray_plane(img)
    if plane.shape[0] < MIN_SIZE or plane.shape[1] < MIN_SIZE:
        raise TooSmall(f"feature detection needs at least {MIN_SIZE}x{MIN_SIZE}, got {plane.shape[1]}x{plane.shape[0]}")
    pyr = _pyramid(plane, config.levels, config.scale_factor)
    cands = []
    for lvl, (lp, _) in enumerate(pyr):
        resp = segment_test(lp, config.fast_threshold)
        rows, cols = np.nonzero(_nonmax(resp))
        cands.extend((lvl, int(r), int(c), float(resp[r, c])) for r, c in zip(rows, cols))
    # stable sort keeps level-major/row-major order among equal responses
    order = sorted(range(len(cands)), key=lambda i: -cands[i][3])[: config.n_features]
    keep = sorted(cands[i] for i in order)
    kps = []
    for lvl, r, c, response in keep:
        lp, s = pyr[lvl]
        kps.append(
            Keypoint(
                x=(c + 0.5) * s - 0.5,
                y=(r + 0.5) * s - 0.5,
                level=lvl,
                orientation=intensity_centroid_angle(lp, c, r),
                response=response,
                col=c,
                row=r,
                scale=s,
            )
        )
    return kps


# ---------------------------------------------------------------------------
# description


def _rotated_pattern(theta: float) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    c, s = math.cos(theta), math.sin(theta)
    x1, y1, x2, y2 = _PATTERN.T
    return (
        np.rint(x1 * c - y1 * s).astype(int),
        np.rint(x1 * s + y1 * c).astype(int),
        np.rint(x2 * c - y2 * s).astype(int),
        np.rint(x2 * s + y2 * c).astype(int),
    )


def describe(img, keypoints: Sequence[Keypoint]) -> DescriptorSet:
    """Rotated binary tests on the 5x5-smoothed patch at each keypoint's level."""
    plane = _gray_plane(img)
    smoothed: dict[int, np.ndarray] = {}
    bits, kept, skipped = [], [], []
    base = ImageBuffer(plane)
    for i, kp in enumerate(keypoints):
        if kp.level not in smoothed:
            lp = plane if kp.level == 0 else downsample(base, kp.scale).plane
            smoothed[kp.level] = box_mean(lp, SMOOTH_RADIUS)
        sp = smoothed[kp.level]
        h, w = sp.shape
        ax, ay, bx, by = _rotated_pattern(kp.orientation)
        xs = np.concatenate([ax, bx]) + kp.col
        ys = np.concatenate([ay, by]) + kp.row
        if xs.min() < 0 or ys.min() < 0 or xs.max() >= w or ys.max() >= h:
            skipped.append(i)
            continue
        tests = sp[kp.row + ay, kp.col + ax] < sp[kp.row + by, kp.col + bx]
        bits.append(np.packbits(tests))
        kept.append(kp)
    arr = np.array(bits, dtype=np.uint8).reshape(-1, 32)
    return DescriptorSet(bits=arr, keypoints=kept, skipped=skipped)


# ---------------------------------------------------------------------------
# matching


def _bits(d) -> np.ndarray:
    if isinstance(d, DescriptorSet):
        return d.bits
    return np.asarray(d, dtype=np.uint8).reshape(-1, 32)


def hamming(a, b) -> int:
    """Number of differing bits between two 32-byte descriptors."""
    a = np.asarray(a, dtype=np.uint8).ravel()
    b = np.asarray(b, dtype=np.uint8).ravel()
    return int(_POPCOUNT[np.bitwise_xor(a, b)].sum())


def hamming_matrix(desc_a, desc_b) -> np.ndarray:
    a, b = _bits(desc_a), _bits(desc_b)
    return _POPCOUNT[np.bitwise_xor(a[:, None, :], b[None, :, :])].sum(axis=-1)


def match(desc_a, desc_b, ratio: float = 0.8) -> list[MatchPair]:
    """Brute-force Hamming matching with a ratio test and one-to-one pruning.

    For each descriptor in ``a`` the nearest ``b`` (lowest index on ties) is
    accepted when its distance is below ``ratio`` times the second-nearest
    distance (256, the largest possible, when ``b`` has a single entry).  When several ``a`` claim the same ``b`` only the closest
    survives, again lowest index first.  Output is sorted by ``index_a``.
    """
    a, b = _bits(desc_a), _bits(desc_b)
    if len(a) == 0 or len(b) == 0:
        return []
    dist = hamming_matrix(a, b)
    nearest = np.argmin(dist, axis=1)
    d1 = dist[np.arange(len(a)), nearest]
    if dist.shape[1] > 1:
        d2 = np.partition(dist, 1, axis=1)[:, 1].astype(np.float64)
    else:
        d2 = np.full(len(a), 256.0)
    owner: dict[int, tuple[int, int]] = {}
    for i in range(len(a)):
        if not d1[i] < ratio * d2[i]:
            continue
        j = int(nearest[i])
        if j not in owner or d1[i] < owner[j][1]:
            owner[j] = (i, int(d1[i]))
    pairs = [MatchPair(i, j, d) for j, (i, d) in owner.items()]
    return sorted(pairs, key=lambda p: p.index_a)


def match_count_report(img_a, img_b, config: DetectConfig = DetectConfig(), ratio: float = 0.8) -> MatchReport:
    """Detect, describe and match two frames; report the counts."""
    kp_a = detect(img_a, config)
    kp_b = detect(img_b, config)
    da = describe(img_a, kp_a)
    db = describe(img_b, kp_b)
    pairs = match(da, db, ratio)
    return MatchReport(
        keypoints_a=len(kp_a),
        keypoints_b=len(kp_b),
        matches=len(pairs),
        distances=[p.distance for p in pairs],
        described_a=len(da),
        described_b=len(db),
        pairs=pairs,
    )
