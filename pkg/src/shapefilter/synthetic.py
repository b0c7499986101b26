"""Deterministic synthetic mask sequences for testing and benchmarks.

Each scenario is a single drifting, pulsing ellipse ("truth").  The noisy
stack perturbs its boundary radially with a few smooth harmonics and, on
designated outlier frames, merges in a second clean blob placed along the
major axis so the union stays one 4-connected component with roughly the
same orientation.  Everything is a pure function of the scenario (the RNG
is seeded from it), so equal scenarios give bit-identical stacks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .contours import Contour
from .metrics import rasterize


@dataclass(frozen=True)
class SyntheticScenario:
    """Parameters of one synthetic single-cell sequence."""

    n_frames: int
    width: int = 128
    height: int = 128
    center: tuple[float, float] = (64.0, 64.0)
    drift: tuple[float, float] = (0.35, 0.2)
    axes0: tuple[float, float] = (15.0, 11.0)
    axes_amp: tuple[float, float] = (2.0, 1.5)
    axes_period: float = 24.0
    outlier_frames: tuple[int, ...] = ()
    outlier_scale: float = 0.9      # blob radius as a fraction of the minor semi-axis
    outlier_overlap: float = 2.5    # px of blob/main overlap, keeps the union connected
    noise_sigma: float = 0.0        # std of the radial boundary perturbation, px
    noise_harmonics: tuple[int, ...] = (2, 3, 4, 5)
    seed: int = 0


def ellipse_mask(width: int, height: int, center, axes) -> np.ndarray:
    """Axis-aligned filled ellipse on the pixel-center lattice."""
    cx, cy = center
    a, b = axes
    ys, xs = np.mgrid[0:height, 0:width]
    return ((xs - cx) / a) ** 2 + ((ys - cy) / b) ** 2 <= 1.0


def _frame_geometry(scenario: SyntheticScenario, t: int):
    cx = scenario.center[0] + scenario.drift[0] * t
    cy = scenario.center[1] + scenario.drift[1] * t
    phase = 2.0 * np.pi * t / scenario.axes_period
    a = scenario.axes0[0] + scenario.axes_amp[0] * np.sin(phase)
    b = scenario.axes0[1] + scenario.axes_amp[1] * np.sin(phase + 0.8)
    return (cx, cy), (a, b)


def outlier_blob(scenario: SyntheticScenario, t: int) -> np.ndarray:
    """Mask of the clutter blob merged into frame ``t`` (noise-free)."""
    (cx, cy), (a, b) = _frame_geometry(scenario, t)
    r = scenario.outlier_scale * b
    bx = cx + a + r - scenario.outlier_overlap
    return ellipse_mask(scenario.width, scenario.height, (bx, cy), (r, r))


def _noisy_boundary_mask(scenario: SyntheticScenario, center, axes,
                         rng: np.random.Generator) -> np.ndarray:
    theta = np.linspace(0.0, 2.0 * np.pi, 256, endpoint=False)
    a, b = axes
    radius = a * b / np.sqrt((b * np.cos(theta)) ** 2 + (a * np.sin(theta)) ** 2)
    noise = np.zeros_like(theta)
    for m in scenario.noise_harmonics:
        amp = rng.normal(0.0, 1.0)
        phase = rng.uniform(0.0, 2.0 * np.pi)
        noise += amp * np.cos(m * theta + phase)
    std = noise.std()
    if std > 0:
        noise *= scenario.noise_sigma / std
    radius = np.maximum(radius + noise, 1.0)
    pts = np.column_stack([
        center[0] + radius * np.cos(theta),
        center[1] + radius * np.sin(theta),
    ])
    return rasterize(Contour(pts), scenario.width, scenario.height)


def generate_synthetic_sequence(
    scenario: SyntheticScenario,
) -> tuple[np.ndarray, np.ndarray]:
    """Build (noisy masks, truth masks) as boolean (t, h, w) stacks."""
    rng = np.random.default_rng(scenario.seed)
    truth = np.zeros((scenario.n_frames, scenario.height, scenario.width), dtype=bool)
    masks = np.zeros_like(truth)
    for t in range(scenario.n_frames):
        center, axes = _frame_geometry(scenario, t)
        truth[t] = ellipse_mask(scenario.width, scenario.height, center, axes)
        if scenario.noise_sigma > 0:
            masks[t] = _noisy_boundary_mask(scenario, center, axes, rng)
        else:
            masks[t] = truth[t]
        if t in scenario.outlier_frames:
            masks[t] |= outlier_blob(scenario, t)
    return masks, truth
