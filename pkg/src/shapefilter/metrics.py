"""Volumetric overlap metrics and contour rasterization.

A mask stack is a (n_frames, height, width) boolean volume; Dice and the
normalized mean squared error are computed over the whole volume, matching
the convention of packing time-indexed 2D results into a 3D set.
"""

from __future__ import annotations

import numpy as np

from .contours import Contour
from .errors import DimensionMismatch

# nudges the scanline off polygon vertices so the even-odd parity is stable
_RAY_JITTER = 1e-9


def as_mask_stack(frames) -> np.ndarray:
    """Coerce a 3D array or list of 2D masks to a boolean (t, h, w) stack."""
    if isinstance(frames, np.ndarray) and frames.ndim == 3:
        return frames.astype(bool)
    arrs = [np.asarray(f).astype(bool) for f in frames]
    if not arrs:
        raise DimensionMismatch("mask stack is empty")
    shape = arrs[0].shape
    if any(a.ndim != 2 or a.shape != shape for a in arrs):
        raise DimensionMismatch("frames disagree in shape")
    return np.stack(arrs, axis=0)


def rasterize(contour: Contour, width: int, height: int) -> np.ndarray:
    """Even-odd polygon fill: a pixel is set iff its center is inside.

    Pixel centers sit on the integer lattice ((x, y) = (col, row)); fills
    are clipped to the canvas, so contours partly or fully outside simply
    lose the out-of-bounds part.
    """
    mask = np.zeros((height, width), dtype=bool)
    pts = contour.points
    if contour.degenerate or pts.shape[0] < 3:
        return mask
    x1, y1 = pts[:, 0], pts[:, 1]
    x2, y2 = np.roll(x1, -1), np.roll(y1, -1)
    row_lo = max(int(np.floor(y1.min())), 0)
    row_hi = min(int(np.ceil(y1.max())), height - 1)
    for row in range(row_lo, row_hi + 1):
        yq = row + _RAY_JITTER
        crossing = (y1 > yq) != (y2 > yq)
        if not crossing.any():
            continue
        xs = x1[crossing] + (yq - y1[crossing]) * (
            (x2[crossing] - x1[crossing]) / (y2[crossing] - y1[crossing])
        )
        xs.sort()
        for a, b in zip(xs[0::2], xs[1::2]):
            lo = max(int(np.floor(a)) + 1, 0)
            hi = min(int(np.ceil(b)) - 1, width - 1)
            if hi >= lo:
                mask[row, lo:hi + 1] = True
    return mask


def _check_same_dims(truth: np.ndarray, test: np.ndarray) -> None:
    if truth.shape != test.shape:
        raise DimensionMismatch(
            f"stack shapes differ: {truth.shape} vs {test.shape}"
        )


def dice(truth, test) -> float:
    """Volume Dice 2|A n B| / (|A| + |B|); empty vs empty counts as 1."""
    a = as_mask_stack(truth)
    b = as_mask_stack(test)
    _check_same_dims(a, b)
    denom = int(a.sum()) + int(b.sum())
    if denom == 0:
        return 1.0
    return 2.0 * int(np.logical_and(a, b).sum()) / denom


def mse(truth, test) -> float:
    """Mean squared per-pixel error over the volume (mismatch fraction)."""
    a = as_mask_stack(truth)
    b = as_mask_stack(test)
    _check_same_dims(a, b)
    return float(np.mean((a.astype(np.float64) - b.astype(np.float64)) ** 2))
