"""Weighted natural cubic smoothing splines over time.

Minimizes  rho * sum_t w(t) (y(t) - g(t))^2  +  (1 - rho) * int (g'')^2 dt
over natural cubic splines, the classical second-derivative formulation:
with Q and R the usual difference/Gram matrices on the positively-weighted
knots, the interior second derivatives solve the pentadiagonal system
(R + lambda Q^T W^-1 Q) m = Q^T y with lambda = (1 - rho) / rho, and the
knot values follow as g = y - lambda W^-1 Q m.  The solve is O(n_t).

Zero-weight frames contribute nothing to the data term (they are excluded
from the solve entirely) but remain breakpoints of the returned spline;
outside the positively-weighted range the minimizer continues linearly.
rho = 1 interpolates the weighted data; rho = 0 degenerates to the
weighted least-squares straight line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solveh_banded

from .errors import NonIncreasingTimes, OutOfRange, TooFewPositiveWeights
from .srv import ShapePath, SrvShape
from .weighting import WeightVector


@dataclass
class SmoothingProblem:
    """One scalar channel observed over strictly increasing times."""

    times: np.ndarray
    values: np.ndarray
    weights: np.ndarray
    rho: float

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float).reshape(-1)
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        self.weights = np.asarray(self.weights, dtype=float).reshape(-1)
        if not (self.times.size == self.values.size == self.weights.size):
            raise ValueError("times, values and weights must share a length")
        if self.times.size < 2:
            raise ValueError("need at least 2 observations")
        if np.any(self.weights < 0) or not np.all(np.isfinite(self.weights)):
            raise ValueError("weights must be finite and nonnegative")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")


@dataclass
class CubicSpline:
    """Piecewise cubic with local power-basis coefficients per interval.

    ``coefficients[i]`` holds (c0, c1, c2, c3) for t in
    [breakpoints[i], breakpoints[i+1]] with u = t - breakpoints[i]:
    g(t) = c0 + c1 u + c2 u^2 + c3 u^3.
    """

    breakpoints: np.ndarray
    coefficients: np.ndarray

    def __post_init__(self):
        self.breakpoints = np.asarray(self.breakpoints, dtype=float).reshape(-1)
        self.coefficients = np.asarray(self.coefficients, dtype=float)
        if self.coefficients.shape != (self.breakpoints.size - 1, 4):
            raise ValueError("coefficients must be (len(breakpoints) - 1, 4)")


def _natural_spline_system(x: np.ndarray, y: np.ndarray, w: np.ndarray,
                           lam: float) -> tuple[np.ndarray, np.ndarray]:
    """Solve for knot values g and second derivatives M on active knots."""
    m = x.size
    h = np.diff(x)
    if m == 2:
        return y.copy(), np.zeros(2)
    inv_h = 1.0 / h
    # Q columns (one per interior knot i = 1..m-2) hold u, v, z at rows
    # i-1, i, i+1
    u = inv_h[:-1]
    z = inv_h[1:]
    v = -(u + z)
    inv_w = 1.0 / w
    # pentadiagonal band of Q^T W^-1 Q (upper form for solveh_banded)
    diag0 = u**2 * inv_w[:-2] + v**2 * inv_w[1:-1] + z**2 * inv_w[2:]
    diag1 = v[:-1] * u[1:] * inv_w[1:-2] + z[:-1] * v[1:] * inv_w[2:-1]
    diag2 = z[:-2] * u[2:] * inv_w[2:-2]
    # tridiagonal R
    r_diag = (h[:-1] + h[1:]) / 3.0
    r_off = h[1:-1] / 6.0

    k = m - 2
    ab = np.zeros((3, k))
    ab[2] = r_diag + lam * diag0
    if k > 1:
        ab[1, 1:] = r_off + lam * diag1
    if k > 2:
        ab[0, 2:] = lam * diag2

    rhs = u * y[:-2] + v * y[1:-1] + z * y[2:]
    m_interior = solveh_banded(ab, rhs, lower=False)

    qm = np.zeros(m)
    qm[:-2] += u * m_interior
    qm[1:-1] += v * m_interior
    qm[2:] += z * m_interior
    g = y - lam * qm * inv_w
    second = np.zeros(m)
    second[1:-1] = m_interior
    return g, second


def _pieces_from_knots(x: np.ndarray, g: np.ndarray,
                       second: np.ndarray) -> np.ndarray:
    """Local cubic coefficients on each active-knot interval."""
    h = np.diff(x)
    c0 = g[:-1]
    c1 = np.diff(g) / h - h * (2.0 * second[:-1] + second[1:]) / 6.0
    c2 = second[:-1] / 2.0
    c3 = np.diff(second) / (6.0 * h)
    return np.column_stack([c0, c1, c2, c3])


def _shift_cubic(coeff: np.ndarray, delta: float) -> np.ndarray:
    """Re-center a cubic's local coordinate by ``delta`` (Taylor shift)."""
    c0, c1, c2, c3 = coeff
    return np.array([
        c0 + delta * (c1 + delta * (c2 + delta * c3)),
        c1 + delta * (2.0 * c2 + 3.0 * delta * c3),
        c2 + 3.0 * delta * c3,
        c3,
    ])


def _weighted_line(x: np.ndarray, y: np.ndarray, w: np.ndarray) -> tuple[float, float]:
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx if sxx > 0 else 0.0
    return ym - slope * xm, slope


def fit_smoothing_spline(problem: SmoothingProblem) -> CubicSpline:
    """Fit the weighted smoothing spline; breakpoints are all input times.

    Raises ``NonIncreasingTimes`` for unsorted abscissae and
    ``TooFewPositiveWeights`` when fewer than two weights are positive.
    """
    t, y, w = problem.times, problem.values, problem.weights
    if np.any(np.diff(t) <= 0):
        raise NonIncreasingTimes("times must be strictly increasing")
    active = w > 0
    if int(active.sum()) < 2:
        raise TooFewPositiveWeights(
            f"need >= 2 positive weights, got {int(active.sum())}"
        )
    xa, ya, wa = t[active], y[active], w[active]

    if problem.rho == 0.0:
        intercept, slope = _weighted_line(xa, ya, wa)
        n_int = t.size - 1
        coeffs = np.zeros((n_int, 4))
        coeffs[:, 0] = intercept + slope * t[:-1]
        coeffs[:, 1] = slope
        return CubicSpline(t.copy(), coeffs)

    lam = (1.0 - problem.rho) / problem.rho
    g, second = _natural_spline_system(xa, ya, wa, lam)
    pieces = _pieces_from_knots(xa, g, second)
    h_last = xa[-1] - xa[-2]
    slope_start = pieces[0, 1]
    slope_end = (pieces[-1, 1] + 2.0 * pieces[-1, 2] * h_last
                 + 3.0 * pieces[-1, 3] * h_last**2)

    coeffs = np.zeros((t.size - 1, 4))
    for j in range(t.size - 1):
        tj = t[j]
        if tj < xa[0]:
            coeffs[j] = [g[0] + slope_start * (tj - xa[0]), slope_start, 0.0, 0.0]
        elif tj >= xa[-1]:
            coeffs[j] = [g[-1] + slope_end * (tj - xa[-1]), slope_end, 0.0, 0.0]
        else:
            i = int(np.searchsorted(xa, tj, side="right")) - 1
            i = min(max(i, 0), xa.size - 2)
            coeffs[j] = _shift_cubic(pieces[i], tj - xa[i])
    return CubicSpline(t.copy(), coeffs)


def evaluate_spline(spline: CubicSpline, t):
    """Evaluate at scalar or array ``t`` within the breakpoint range."""
    arr = np.asarray(t, dtype=float)
    bp = spline.breakpoints
    if np.any(arr < bp[0]) or np.any(arr > bp[-1]):
        raise OutOfRange(
            f"evaluation outside [{bp[0]}, {bp[-1]}]"
        )
    idx = np.clip(np.searchsorted(bp, arr, side="right") - 1, 0, bp.size - 2)
    u = arr - bp[idx]
    c = spline.coefficients[idx]
    out = c[..., 0] + u * (c[..., 1] + u * (c[..., 2] + u * c[..., 3]))
    return float(out) if np.isscalar(t) else out


def roughness(spline: CubicSpline) -> float:
    """Exact integral of the squared second derivative over the fit range."""
    h = np.diff(spline.breakpoints)
    c2 = spline.coefficients[:, 2]
    c3 = spline.coefficients[:, 3]
    per_piece = 4.0 * c2**2 * h + 12.0 * c2 * c3 * h**2 + 12.0 * c3**2 * h**3
    return float(per_piece.sum())


def _path_channels(path: ShapePath) -> np.ndarray:
    """Flatten a path to (n_frames, 2n + 2) scalar channels."""
    qs = path.q_stack()
    flat = qs.reshape(qs.shape[0], -1)
    return np.hstack([flat, path.basepoints()])


def _channels_to_path(channels: np.ndarray, times: np.ndarray, n: int) -> ShapePath:
    shapes = []
    for row in channels:
        q = row[: 2 * n].reshape(n, 2)
        shapes.append(SrvShape(q, row[2 * n:]))
    return ShapePath(shapes, times.copy())


def fit_path_with_splines(
    path: ShapePath,
    weights: WeightVector,
    rho: float,
    normalize_weights: bool = True,
) -> tuple[ShapePath, list[CubicSpline]]:
    """Channel-wise weighted smoothing fit of a shape path.

    Each of the 2n SRV channels and the 2 basepoint channels is fitted
    independently with the shared weights and rho, then sampled back at the
    original times.  Weights are rescaled to mean 1 before the solve (so rho
    keeps a comparable meaning across weighting schemes) unless
    ``normalize_weights`` is off.
    """
    w = np.asarray(weights.w, dtype=float)
    if w.size != len(path):
        raise ValueError(f"weight length {w.size} != path length {len(path)}")
    mean = w.mean()
    if normalize_weights and mean > 0:
        w = w / mean
    channels = _path_channels(path)
    fitted = np.empty_like(channels)
    splines: list[CubicSpline] = []
    for c in range(channels.shape[1]):
        spline = fit_smoothing_spline(
            SmoothingProblem(path.times, channels[:, c], w, rho)
        )
        splines.append(spline)
        fitted[:, c] = evaluate_spline(spline, path.times)
    return _channels_to_path(fitted, path.times, path.n), splines


def fit_path(
    path: ShapePath,
    weights: WeightVector,
    rho: float,
    normalize_weights: bool = True,
) -> ShapePath:
    """As :func:`fit_path_with_splines`, returning only the fitted path."""
    fitted, _ = fit_path_with_splines(path, weights, rho, normalize_weights)
    return fitted
