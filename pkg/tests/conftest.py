"""Shared test helpers: smooth random contours and geometric distances."""

import numpy as np
import pytest

from shapefilter import Contour, canonical_seed, resample_contour, srv_transform


def fourier_contour(seed: int, n: int = 96, radius: float = 10.0,
                    wobble: float = 0.25) -> Contour:
    """Smooth star-free random closed contour, equidistantly resampled."""
    rng = np.random.default_rng(seed)
    theta = 2.0 * np.pi * np.arange(512) / 512
    r = np.full_like(theta, radius)
    for m in (2, 3, 4, 5):
        r += radius * wobble * rng.uniform(0.1, 0.3) * np.cos(
            m * theta + rng.uniform(0, 2 * np.pi)
        )
    pts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    return resample_contour(Contour(pts), n)


def fourier_shape(seed: int, n: int = 96, radius: float = 10.0):
    return srv_transform(canonical_seed(fourier_contour(seed, n, radius)))


def circle_contour(radius: float, n: int, center=(0.0, 0.0)) -> Contour:
    s = 2.0 * np.pi * np.arange(n) / n
    return Contour(np.column_stack([
        center[0] + radius * np.cos(s),
        center[1] + radius * np.sin(s),
    ]))


def max_dist_to_polyline(points: np.ndarray, polyline: np.ndarray) -> float:
    """Largest distance from any query point to a closed polyline."""
    a = polyline
    b = np.roll(polyline, -1, axis=0)
    ab = b - a
    denom = np.maximum((ab ** 2).sum(axis=1), 1e-30)
    best = np.full(len(points), np.inf)
    for i in range(len(a)):
        t = np.clip(((points - a[i]) @ ab[i]) / denom[i], 0.0, 1.0)
        proj = a[i] + np.outer(t, ab[i])
        best = np.minimum(best, np.linalg.norm(points - proj, axis=1))
    return float(best.max())


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
