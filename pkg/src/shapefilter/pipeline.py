"""End-to-end filtering of a mask sequence.

Stages: trace and resample every frame boundary, seed it canonically,
transform to SRV, align everything to frame 0, fit a lightly smoothed
reference path, derive per-frame weights, run the weighted fit, and
reconstruct Cartesian contours.  Reconstruction inverts each frame's
alignment so outputs live in the frame's observed pose; with unit weights
and rho = 1 the pipeline therefore reproduces the resampled inputs up to
SRV round-trip error.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contours import Contour, canonical_seed, resample_contour, trace_boundary
from .errors import AllWeightsZero, InsufficientFrames
from .metrics import as_mask_stack
from .parallel import map_ordered
from .smoothing import fit_path
from .srv import (
    Alignment,
    ShapePath,
    align_params,
    apply_alignment,
    srv_inverse,
    srv_transform,
    undo_alignment,
)
from .weighting import (
    SCHEMES,
    WeightVector,
    bi3_weights,
    piecewise_weights,
    residual_profile,
    sgaussian_weights,
    unity_weights,
)
from .synthetic import (  # noqa: F401  (re-exported surface of this module)
    SyntheticScenario,
    generate_synthetic_sequence,
)


@dataclass
class FilterConfig:
    """Knobs of one filter run; defaults suit 10-20 um cells at ~1 um/px."""

    n_samples: int = 100
    rho: float = 0.6
    rho_pre: float = 0.05
    scheme: str = "bi3"
    a_const: float = 1.0
    c_const: float = 1.0
    outlier_flags: np.ndarray | None = None
    normalize_weights: bool = True

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"unknown scheme {self.scheme!r}, pick one of {SCHEMES}")
        if not 0.0 <= self.rho <= 1.0 or not 0.0 <= self.rho_pre <= 1.0:
            raise ValueError("rho and rho_pre must lie in [0, 1]")
        if self.scheme == "piecewise" and self.outlier_flags is None:
            raise ValueError("scheme 'piecewise' requires outlier flags")
        if self.outlier_flags is not None:
            self.outlier_flags = np.asarray(self.outlier_flags, dtype=bool).reshape(-1)


@dataclass
class PreparedSequence:
    """Ingested and aligned sequence, reusable across weighting schemes."""

    contours: list[Contour]          # resampled + seeded inputs, image frame
    path: ShapePath                  # SRV path aligned to frame 0
    alignments: list[Alignment]      # per-frame alignment onto frame 0
    frame_shape: tuple[int, int] = field(default=(0, 0))


def prepare_sequence(masks, n_samples: int = 100) -> PreparedSequence:
    """Trace, resample, seed, SRV-transform and align all frames."""
    stack = as_mask_stack(masks)
    if stack.shape[0] < 2:
        raise InsufficientFrames(f"need >= 2 frames, got {stack.shape[0]}")

    def ingest(frame):
        return canonical_seed(resample_contour(trace_boundary(frame), n_samples))

    contours = map_ordered(ingest, stack)
    shapes = [srv_transform(c) for c in contours]
    reference = shapes[0]
    alignments = [align_params(reference, s) for s in shapes]
    aligned = [apply_alignment(s, p) for s, p in zip(shapes, alignments)]
    times = np.arange(stack.shape[0], dtype=float)
    return PreparedSequence(
        contours, ShapePath(aligned, times), alignments, stack.shape[1:]
    )


def compute_weights(
    prepared: PreparedSequence,
    config: FilterConfig,
    delta: ShapePath | None = None,
) -> WeightVector:
    """Per-frame weights for the configured scheme.

    ``bi3`` measures residuals against ``delta`` (the rho_pre reference fit,
    computed here when not supplied); the other schemes ignore it.
    """
    n_frames = len(prepared.path)
    if config.scheme == "unity":
        return unity_weights(n_frames)
    if config.scheme == "piecewise":
        flags = config.outlier_flags
        if flags is None or flags.size != n_frames:
            raise ValueError(
                f"piecewise scheme needs {n_frames} outlier flags"
            )
        return piecewise_weights(flags, config.c_const)
    if config.scheme == "sgaussian":
        return sgaussian_weights(prepared.path)
    if delta is None:
        delta = presmooth_path(prepared, config)
    profile = residual_profile(prepared.path, delta)
    return bi3_weights(profile, config.a_const)


def presmooth_path(prepared: PreparedSequence, config: FilterConfig) -> ShapePath:
    """Reference fit with unit weights and a small data-term emphasis."""
    return fit_path(
        prepared.path,
        unity_weights(len(prepared.path)),
        config.rho_pre,
        config.normalize_weights,
    )


def filter_prepared(
    prepared: PreparedSequence,
    config: FilterConfig,
    delta: ShapePath | None = None,
) -> tuple[list[Contour], WeightVector, ShapePath]:
    """Weight, fit and reconstruct an already prepared sequence."""
    if config.scheme == "bi3" and delta is None:
        delta = presmooth_path(prepared, config)
    weights = compute_weights(prepared, config, delta)
    if not np.any(weights.w > 0):
        raise AllWeightsZero("every frame weight is zero")
    fitted = fit_path(prepared.path, weights, config.rho, config.normalize_weights)
    contours_out = [
        srv_inverse(undo_alignment(shape, params))
        for shape, params in zip(fitted.shapes, prepared.alignments)
    ]
    return contours_out, weights, fitted


def filter_sequence(
    masks, config: FilterConfig
) -> tuple[list[Contour], WeightVector, ShapePath]:
    """Run the whole filter over a mask stack.

    Returns the reconstructed per-frame contours (in image coordinates),
    the weights that drove the fit, and the fitted SRV path (in frame-0
    aligned coordinates).  The output always has one contour per input
    frame; outlier frames are substituted, never dropped.
    """
    prepared = prepare_sequence(masks, config.n_samples)
    return filter_prepared(prepared, config)
