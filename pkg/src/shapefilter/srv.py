"""Square-root-velocity (SRV) representation of closed contours.

A contour beta(s), parameterized by arclength s in [0, 2pi) over n
equidistant samples, maps to q(s) = beta'(s) / sqrt(||beta'(s)||).  The
representation drops translation; comparing shapes after a cyclic index
shift and a planar rotation makes the distance insensitive to the seed
point and to pose.  All geometry here is computed in the flat SRV
coordinate chart: geodesics are straight lines, so the shape distance is
the aligned L2 norm under the discrete inner product sum_i <.,.> ds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .contours import Contour, resample_contour
from .errors import DegenerateSegment, SampleCountMismatch

_TWO_PI = 2.0 * np.pi


@dataclass
class SrvShape:
    """SRV coordinate array plus the Cartesian anchor of the start point."""

    q: np.ndarray          # (n, 2)
    basepoint: np.ndarray  # (2,)

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        if q.ndim != 2 or q.shape[1] != 2:
            raise ValueError(f"q must be (n, 2), got {q.shape}")
        if not np.all(np.isfinite(q)):
            raise ValueError("q must be finite")
        self.q = q
        self.basepoint = np.asarray(self.basepoint, dtype=float).reshape(2)

    @property
    def n(self) -> int:
        return self.q.shape[0]

    @property
    def param_step(self) -> float:
        return _TWO_PI / self.n


@dataclass
class ShapePath:
    """Time-ordered sequence of SRV shapes sharing one sample count."""

    shapes: list[SrvShape]
    times: np.ndarray

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float).reshape(-1)
        if len(self.shapes) != self.times.size:
            raise ValueError("shapes and times must have equal length")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        counts = {s.n for s in self.shapes}
        if len(counts) > 1:
            raise SampleCountMismatch(f"shapes have mixed sample counts {counts}")

    def __len__(self) -> int:
        return len(self.shapes)

    @property
    def n(self) -> int:
        return self.shapes[0].n if self.shapes else 0

    def q_stack(self) -> np.ndarray:
        """Stack all q arrays as (n_frames, n, 2)."""
        return np.stack([s.q for s in self.shapes], axis=0)

    def basepoints(self) -> np.ndarray:
        return np.stack([s.basepoint for s in self.shapes], axis=0)


@dataclass(frozen=True)
class Alignment:
    """Cyclic index shift and planar rotation mapping a shape onto a reference."""

    shift: int
    angle: float
    cost: float = field(default=0.0, compare=False)


def _as_complex(q: np.ndarray) -> np.ndarray:
    return q[:, 0] + 1j * q[:, 1]


def _from_complex(z: np.ndarray) -> np.ndarray:
    return np.column_stack([z.real, z.imag])


def srv_transform(contour: Contour) -> SrvShape:
    """SRV transform of an equidistant closed contour.

    The velocity is the central difference on the cyclic point list with
    step ds = 2pi/n; the basepoint is the first contour point.  Raises
    ``DegenerateSegment`` if any edge or central difference (in velocity
    units) falls below 1e-12, which flags coincident points instead of
    silently producing near-zero q entries.
    """
    pts = contour.points
    n = pts.shape[0]
    if n < 8:
        raise SampleCountMismatch(f"need at least 8 samples, got {n}")
    ds = _TWO_PI / n
    edge_speed = np.linalg.norm(np.roll(pts, -1, axis=0) - pts, axis=1) / ds
    beta_dot = (np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)) / (2.0 * ds)
    speed = np.linalg.norm(beta_dot, axis=1)
    if np.any(edge_speed < 1e-12) or np.any(speed < 1e-12):
        raise DegenerateSegment("contour has coincident points (zero velocity)")
    q = beta_dot / np.sqrt(speed)[:, None]
    return SrvShape(q, pts[0].copy())


def _integrated_offsets(q: np.ndarray) -> np.ndarray:
    """Cumulative-trapezoid positions of the curve described by q.

    Returns (n + 1, 2) offsets relative to the start point, with the last
    row being the raw (uncorrected) closure endpoint at s = 2pi.
    """
    n = q.shape[0]
    ds = _TWO_PI / n
    velocity = q * np.linalg.norm(q, axis=1)[:, None]
    closed = np.vstack([velocity, velocity[:1]])
    increments = 0.5 * ds * (closed[:-1] + closed[1:])
    out = np.zeros((n + 1, 2))
    np.cumsum(increments, axis=0, out=out[1:])
    return out


def srv_inverse(shape: SrvShape) -> Contour:
    """Reconstruct the Cartesian contour from an SRV shape.

    Integrates beta(s) = beta(0) + int_0^s q ||q|| du by cumulative
    trapezoid, removes the closure gap linearly (subtracting (s/2pi) times
    the endpoint drift), and resamples back to equidistant spacing.  An
    all-zero field yields a contour collapsed at the basepoint, flagged
    ``degenerate``.
    """
    n = shape.n
    rel = _integrated_offsets(shape.q)
    gap = rel[-1]
    rel = rel - np.outer(np.arange(n + 1) / n, gap)
    pts = shape.basepoint + rel[:n]
    raw = Contour(pts)
    if raw.perimeter < 1e-9:
        return Contour(np.tile(shape.basepoint, (n, 1)), degenerate=True)
    return resample_contour(raw, n)


def align_params(reference: SrvShape, target: SrvShape) -> Alignment:
    """Best cyclic shift and rotation of ``target`` onto ``reference``.

    Searches all n shifts with the rotation re-solved per shift; both come
    from one cyclic cross-correlation, c_k = sum_i a_i * conj(b_{i+k}),
    whose maximizing modulus gives the L2-optimal pair.  The returned cost
    is the squared aligned distance under the discrete inner product.
    """
    if reference.n != target.n:
        raise SampleCountMismatch(
            f"sample counts differ: {reference.n} vs {target.n}"
        )
    a = _as_complex(reference.q)
    b = _as_complex(target.q)
    n = a.size
    # c_k = sum_i a_i conj(b_{i+k}) = IDFT[fft(a) * conj(fft(b))] at -k mod n
    spectrum = np.fft.ifft(np.fft.fft(a) * np.conj(np.fft.fft(b)))
    corr = spectrum[(-np.arange(n)) % n]
    k = int(np.argmax(np.abs(corr)))
    c = corr[k]
    angle = float(np.angle(c)) if np.abs(c) > 0 else 0.0
    ds = _TWO_PI / n
    sq = float(np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2) - 2.0 * np.abs(c))
    return Alignment(shift=k, angle=angle, cost=max(sq, 0.0) * ds)


def apply_alignment(shape: SrvShape, alignment: Alignment) -> SrvShape:
    """Shift and rotate a shape's q field; the basepoint rides along as is.

    The basepoint keeps anchoring the seed point of the observed contour:
    that anchor is defined by the contour alone, so it stays stable even
    when near-symmetric shapes make the shift/rotation branch ambiguous.
    """
    shifted = np.roll(shape.q, -alignment.shift, axis=0)
    z = _as_complex(shifted) * np.exp(1j * alignment.angle)
    return SrvShape(_from_complex(z), shape.basepoint.copy())


def undo_alignment(shape: SrvShape, alignment: Alignment) -> SrvShape:
    """Inverse of :func:`apply_alignment` (exact up to rounding)."""
    z = _as_complex(shape.q) * np.exp(-1j * alignment.angle)
    q = np.roll(_from_complex(z), alignment.shift, axis=0)
    return SrvShape(q, shape.basepoint.copy())


def align(reference: SrvShape, target: SrvShape) -> SrvShape:
    """Align ``target`` to ``reference`` over all cyclic shifts and rotations."""
    return apply_alignment(target, align_params(reference, target))


def geodesic_distance(a: SrvShape, b: SrvShape) -> float:
    """Shape distance: aligned L2 norm in SRV coordinates.

    In the flat SRV chart the geodesic between two shapes is a straight
    line, so its length reduces to ||a.q - align(a, b).q|| under the
    discrete inner product sum_i <., .> ds.
    """
    return float(np.sqrt(align_params(a, b).cost))
