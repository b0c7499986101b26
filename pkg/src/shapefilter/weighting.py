"""Per-frame weighting schemes for the robust shape regression.

Four schemes are provided.  ``unity`` treats every frame alike and
``piecewise`` zeroes externally flagged frames.  The two data-driven
schemes downweight frames automatically: ``bi3`` builds tricube-style
weights from the geodesic residuals against a lightly smoothed reference
path, and ``sgaussian`` places a Gaussian kernel over the geodesic
distance to the path's componentwise median shape.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyPath, InvalidLength, LengthMismatch
from .srv import ShapePath, SrvShape, geodesic_distance

SCHEMES = ("unity", "piecewise", "bi3", "sgaussian")


@dataclass
class WeightVector:
    """Nonnegative per-frame weights plus the scheme that produced them."""

    w: np.ndarray
    scheme: str

    def __post_init__(self):
        self.w = np.asarray(self.w, dtype=float).reshape(-1)
        if np.any(self.w < 0) or not np.all(np.isfinite(self.w)):
            raise ValueError("weights must be finite and nonnegative")


@dataclass
class ResidualProfile:
    """Geodesic residuals of a path against its pre-smoothed reference.

    ``median_r`` uses the lower-middle element for even counts so the
    median is always an attained residual; ``sigma_r`` is the mean absolute
    deviation from it and ``tau = sigma_r + (sigma_r - min(r))`` the
    tolerance handed to the Bi3 kernel.  ``tau`` can go negative when the
    residuals are (near-)constant; consumers guard the resulting
    denominator.
    """

    r: np.ndarray
    median_r: float
    sigma_r: float
    tau: float


def _lower_median(values: np.ndarray) -> float:
    return float(np.sort(values)[(values.size - 1) // 2])


def unity_weights(n_frames: int) -> WeightVector:
    """All-ones weights: no preference between frames."""
    if n_frames < 1:
        raise InvalidLength(f"need at least 1 frame, got {n_frames}")
    return WeightVector(np.ones(n_frames), "unity")


def piecewise_weights(outlier_flags, c: float) -> WeightVector:
    """Step weights: ``c`` on ordinary frames, 0 on flagged outliers."""
    if c <= 0:
        raise ValueError(f"constant must be positive, got {c}")
    flags = np.asarray(outlier_flags, dtype=bool).reshape(-1)
    return WeightVector(np.where(flags, 0.0, float(c)), "piecewise")


def residual_profile(path: ShapePath, presmooth: ShapePath) -> ResidualProfile:
    """Per-frame geodesic residual of ``path`` against ``presmooth``."""
    if len(path) != len(presmooth):
        raise LengthMismatch(
            f"path length {len(path)} != presmooth length {len(presmooth)}"
        )
    r = np.array([
        geodesic_distance(presmooth.shapes[i], path.shapes[i])
        for i in range(len(path))
    ])
    median_r = _lower_median(r)
    sigma_r = float(np.abs(r - median_r).mean())
    tau = sigma_r + (sigma_r - float(r.min()))
    return ResidualProfile(r, median_r, sigma_r, tau)


def bi3_weights(profile: ResidualProfile, a: float = 1.0) -> WeightVector:
    """Cubed-tricube weights w = A (1 - (r / (median + tau))^3)^3, clipped at 0.

    The denominator is guarded at eps = 1e-9 (1 + median) so constant
    residual profiles (where tau = -median) degrade to zero weights instead
    of dividing by zero; negative kernel values are clipped to zero rather
    than fed to the solver as negative data weights.
    """
    if a <= 0:
        raise ValueError(f"amplifier must be positive, got {a}")
    denom = max(profile.median_r + profile.tau, 1e-9 * (1.0 + profile.median_r))
    ratio = profile.r / denom
    w = a * (1.0 - ratio**3) ** 3
    return WeightVector(np.maximum(w, 0.0), "bi3")


def median_shape(path: ShapePath) -> SrvShape:
    """Componentwise median shape of a pre-aligned path.

    Every SRV coordinate (and basepoint coordinate) takes the lower-middle
    element over frames, so each component value is attained by some frame.
    """
    if len(path) == 0:
        raise EmptyPath("cannot take the median of an empty path")
    k = (len(path) - 1) // 2
    q_med = np.sort(path.q_stack(), axis=0)[k]
    base_med = np.sort(path.basepoints(), axis=0)[k]
    return SrvShape(q_med, base_med)


def sgaussian_weights(path: ShapePath) -> WeightVector:
    """Gaussian kernel over geodesic distance to the median shape.

    sigma^2 is the mean squared distance to the median shape; the weight of
    frame t is exp(-d^2 / (2 sigma^2)) / sqrt(2 pi sigma^2).  When the
    spread vanishes (all shapes identical) the scheme falls back to unit
    weights.
    """
    if len(path) == 0:
        raise EmptyPath("cannot weight an empty path")
    q_med = median_shape(path)
    d = np.array([geodesic_distance(s, q_med) for s in path.shapes])
    var = float(np.mean(d**2))
    if var < 1e-12:
        return WeightVector(np.ones(len(path)), "sgaussian")
    w = np.exp(-(d**2) / (2.0 * var)) / np.sqrt(2.0 * np.pi * var)
    return WeightVector(w, "sgaussian")
