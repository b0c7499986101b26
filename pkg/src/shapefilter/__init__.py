"""Shape-space smoothing filter for time-indexed cell segmentation masks.

Repairs a sequence of binary segmentation masks by projecting each frame's
boundary into square-root-velocity shape coordinates, fitting a robust
weighted smoothing spline across time, and reconstructing smoothed
contours and masks.  Ships Dice/MSE evaluation, an isomap trajectory
projection, a synthetic data generator, and a CLI (``shapefilter``).
"""

__version__ = "0.1.0"

from .contours import Contour, canonical_seed, resample_contour, trace_boundary
from .embedding import Embedding2D, embedding_svg, isomap_embed, trajectory_length
from .errors import ShapeFilterError
from .metrics import as_mask_stack, dice, mse, rasterize
from .pipeline import (
    FilterConfig,
    PreparedSequence,
    filter_prepared,
    filter_sequence,
    prepare_sequence,
)
from .smoothing import (
    CubicSpline,
    SmoothingProblem,
    evaluate_spline,
    fit_path,
    fit_path_with_splines,
    fit_smoothing_spline,
    roughness,
)
from .srv import (
    Alignment,
    ShapePath,
    SrvShape,
    align,
    align_params,
    apply_alignment,
    geodesic_distance,
    srv_inverse,
    srv_transform,
    undo_alignment,
)
from .synthetic import SyntheticScenario, generate_synthetic_sequence
from .weighting import (
    ResidualProfile,
    WeightVector,
    bi3_weights,
    median_shape,
    piecewise_weights,
    residual_profile,
    sgaussian_weights,
    unity_weights,
)

__all__ = [
    "__version__",
    "Alignment",
    "Contour",
    "CubicSpline",
    "Embedding2D",
    "FilterConfig",
    "PreparedSequence",
    "ResidualProfile",
    "ShapeFilterError",
    "ShapePath",
    "SmoothingProblem",
    "SrvShape",
    "SyntheticScenario",
    "WeightVector",
    "align",
    "align_params",
    "apply_alignment",
    "as_mask_stack",
    "bi3_weights",
    "canonical_seed",
    "dice",
    "embedding_svg",
    "evaluate_spline",
    "filter_prepared",
    "filter_sequence",
    "fit_path",
    "fit_path_with_splines",
    "fit_smoothing_spline",
    "generate_synthetic_sequence",
    "geodesic_distance",
    "isomap_embed",
    "median_shape",
    "mse",
    "piecewise_weights",
    "prepare_sequence",
    "rasterize",
    "resample_contour",
    "residual_profile",
    "roughness",
    "sgaussian_weights",
    "srv_inverse",
    "srv_transform",
    "trace_boundary",
    "trajectory_length",
    "undo_alignment",
    "unity_weights",
]
