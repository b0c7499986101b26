"""Boundary extraction and arclength resampling of binary masks.

Coordinate convention: a mask is a 2D boolean array indexed ``[row, col]``;
contour points are ``(x, y) = (col, row)`` floats with pixel centers on the
integer lattice.  Contours are implicitly closed (last point connects back
to the first) and are normalized to positive shoelace area in this frame.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .errors import (
    DegenerateComponent,
    EmptyMask,
    InvalidSampleCount,
    TooFewPoints,
)

# Moore neighborhood in clockwise order starting west, as (drow, dcol).
_MOORE = (
    (0, -1), (-1, -1), (-1, 0), (-1, 1),
    (0, 1), (1, 1), (1, 0), (1, -1),
)
_MOORE_INDEX = {d: i for i, d in enumerate(_MOORE)}

_FOUR_CONNECTED = np.array([[0, 1, 0], [1, 1, 1], [0, 1, 0]], dtype=bool)


@dataclass
class Contour:
    """Closed planar curve as an ordered list of ``(x, y)`` points.

    ``degenerate`` marks curves that collapsed to (numerically) a single
    point, e.g. reconstructions of an all-zero velocity field.
    """

    points: np.ndarray
    degenerate: bool = field(default=False)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"contour points must be (n, 2), got {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("contour points must be finite")
        self.points = pts

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def perimeter(self) -> float:
        closed = np.vstack([self.points, self.points[:1]])
        return float(np.linalg.norm(np.diff(closed, axis=0), axis=1).sum())

    @property
    def centroid(self) -> np.ndarray:
        return self.points.mean(axis=0)

    @property
    def signed_area(self) -> float:
        x, y = self.points[:, 0], self.points[:, 1]
        xn, yn = np.roll(x, -1), np.roll(y, -1)
        return float(0.5 * np.sum(x * yn - xn * y))


def _largest_component(mask: np.ndarray) -> np.ndarray:
    labeled, count = ndimage.label(mask, structure=_FOUR_CONNECTED)
    if count == 0:
        raise EmptyMask("mask has no foreground pixel")
    if count == 1:
        return labeled == 1
    sizes = np.bincount(labeled.ravel())[1:]
    # argmax returns the first maximum, i.e. the first-scanned component on ties
    return labeled == (int(np.argmax(sizes)) + 1)


def _moore_trace(component: np.ndarray) -> np.ndarray:
    """Trace the outer boundary pixel chain of a single 4-connected component."""
    rows, cols = np.nonzero(component)
    start = (int(rows[0]), int(cols[0]))  # topmost, then leftmost
    h, w = component.shape

    def fg(r: int, c: int) -> bool:
        return 0 <= r < h and 0 <= c < w and bool(component[r, c])

    chain = [start]
    p = start
    prev_dir = 0  # start's west neighbor is background by construction
    first_move = None
    max_steps = 8 * int(component.sum()) + 8
    for _ in range(max_steps):
        found = None
        for i in range(1, 9):
            d = (prev_dir + i) % 8
            nb = (p[0] + _MOORE[d][0], p[1] + _MOORE[d][1])
            if fg(*nb):
                found = d
                break
        if found is None:
            break  # isolated pixel
        if p == start:
            if first_move is None:
                first_move = found
            elif found == first_move:
                break  # re-entering the start in the initial direction
        back = (p[0] + _MOORE[(found + 7) % 8][0], p[1] + _MOORE[(found + 7) % 8][1])
        p = (p[0] + _MOORE[found][0], p[1] + _MOORE[found][1])
        chain.append(p)
        prev_dir = _MOORE_INDEX[(back[0] - p[0], back[1] - p[1])]
    if len(chain) > 1 and chain[-1] == chain[0]:
        chain.pop()
    return np.array(chain, dtype=float)


def trace_boundary(mask: np.ndarray) -> Contour:
    """Outer boundary of the largest 4-connected foreground component.

    Returns the Moore-neighbor boundary chain through pixel centers as an
    ``(x, y)`` contour with positive shoelace area.  Ties in component size
    go to the first-scanned component.

    Raises ``EmptyMask`` when nothing is set and ``DegenerateComponent``
    when the dominant component has fewer than 4 boundary pixels.
    """
    mask = np.asarray(mask).astype(bool)
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2D, got shape {mask.shape}")
    component = _largest_component(mask)
    chain_rc = _moore_trace(component)
    distinct = {(int(r), int(c)) for r, c in chain_rc}
    if len(distinct) < 4:
        raise DegenerateComponent(
            f"largest component has only {len(distinct)} boundary pixels"
        )
    contour = Contour(chain_rc[:, ::-1].copy())  # (row, col) -> (x, y)
    if contour.signed_area < 0:
        contour = Contour(contour.points[::-1].copy())
    return contour


def _distinct_closed_points(points: np.ndarray) -> np.ndarray:
    """Drop consecutive duplicates, including the wrap-around pair.

    The first point is always kept so resampling can anchor on it.
    """
    keep = np.ones(points.shape[0], dtype=bool)
    keep[1:] = np.linalg.norm(np.diff(points, axis=0), axis=1) > 1e-12
    pts = points[keep]
    while pts.shape[0] > 1 and np.linalg.norm(pts[-1] - pts[0]) <= 1e-12:
        pts = pts[:-1]
    return pts


def _equal_arclength_pass(pts: np.ndarray, n: int) -> np.ndarray:
    """One pass of equal-arclength sampling along the closed polyline.

    The n parameter gaps are total/n each, so they sum to the full source
    perimeter (no truncation of the closing arc), anchored at pts[0].
    """
    closed = np.vstack([pts, pts[:1]])
    seg = np.linalg.norm(np.diff(closed, axis=0), axis=1)
    cum = np.concatenate([[0.0], np.cumsum(seg)])
    total = cum[-1]
    targets = total * np.arange(n) / n
    x = np.interp(targets, cum, closed[:, 0])
    y = np.interp(targets, cum, closed[:, 1])
    return np.column_stack([x, y])


def resample_contour(contour: Contour, n: int) -> Contour:
    """Resample a closed contour to ``n`` points at equal arclength spacing.

    The equal-spacing pass is iterated to its fixed point so the output's
    own chord lengths agree to machine precision, which makes the operation
    idempotent at fixed n.  The first output point is the input's first
    point.
    """
    if n < 8:
        raise InvalidSampleCount(f"need n >= 8 samples, got {n}")
    pts = _distinct_closed_points(contour.points)
    if pts.shape[0] < 3:
        raise TooFewPoints(
            f"contour has {pts.shape[0]} distinct points, need at least 3"
        )
    out = _equal_arclength_pass(pts, n)
    for _ in range(64):
        seg = np.linalg.norm(np.diff(np.vstack([out, out[:1]]), axis=0), axis=1)
        total = seg.sum()
        if np.abs(seg - total / n).max() <= 1e-13 * max(total, 1e-30):
            break
        out = _equal_arclength_pass(out, n)
    return Contour(out)


def canonical_seed(contour: Contour) -> Contour:
    """Rotate the point list so index 0 sits at the smallest centroid angle.

    The angle is measured counterclockwise from the centroid's positive
    x-axis into [0, 2pi); ties go to the smaller input index.  Applying the
    operation twice is a no-op.
    """
    rel = contour.points - contour.centroid
    angles = np.mod(np.arctan2(rel[:, 1], rel[:, 0]), 2.0 * np.pi)
    k = int(np.argmin(angles))
    return Contour(np.roll(contour.points, -k, axis=0), degenerate=contour.degenerate)
