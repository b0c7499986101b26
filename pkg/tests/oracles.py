"""Independent reference implementations used only to check the library.

Each oracle takes a deliberately different route from the code under test:
the smoothing objective is minimized directly on a dense grid, shape
alignment is found by looping every shift, MDS is re-derived from the
textbook double-centering, components come from a hand-rolled flood fill,
and point-in-polygon is a plain crossing counter.
"""

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import spsolve

# subdiv=150 balances discretization error (O(h^2), ~2e-5 here) against the
# conditioning loss that creeps in once penalty entries grow like 1/h^3
QP_SUBDIV = 150


def qp_smoothing_minimizer(times, values, weights, rho, subdiv=QP_SUBDIV):
    """Minimize rho*sum w (y - f)^2 + (1-rho)*int f'' ^2 on a dense grid.

    The grid contains every data abscissa; the curvature integral is the
    squared non-uniform 3-point second difference with trapezoid node
    weights.  Returns the minimizer sampled at the data abscissae.
    """
    times = np.asarray(times, float)
    segments = [
        np.linspace(times[i], times[i + 1], subdiv, endpoint=False)
        for i in range(len(times) - 1)
    ]
    grid = np.concatenate(segments + [times[-1:]])
    data_idx = np.searchsorted(grid, times)
    assert np.allclose(grid[data_idx], times)
    n = grid.size
    hm = np.diff(grid)[:-1]
    hp = np.diff(grid)[1:]
    a = 2.0 / (hm * (hm + hp))
    b = -2.0 / (hm * hp)
    c = 2.0 / (hp * (hm + hp))
    rows = np.repeat(np.arange(1, n - 1), 3)
    cols = np.stack(
        [np.arange(0, n - 2), np.arange(1, n - 1), np.arange(2, n)], axis=1
    ).ravel()
    vals = np.stack([a, b, c], axis=1).ravel()
    second_diff = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    node_weight = np.zeros(n)
    node_weight[1:-1] = (hm + hp) / 2.0
    data_term = sp.csr_matrix(
        (np.asarray(weights, float), (data_idx, data_idx)), shape=(n, n)
    )
    system = rho * data_term + (1.0 - rho) * (
        second_diff.T @ sp.diags(node_weight) @ second_diff
    )
    y_full = np.zeros(n)
    y_full[data_idx] = values
    f = spsolve(system.tocsc(), rho * (data_term @ y_full))
    return f[data_idx]


def brute_force_align(ref_q: np.ndarray, tgt_q: np.ndarray):
    """Loop every cyclic shift, solving the rotation per shift in closed form."""
    n = ref_q.shape[0]
    a = ref_q[:, 0] + 1j * ref_q[:, 1]
    b = tgt_q[:, 0] + 1j * tgt_q[:, 1]
    ds = 2.0 * np.pi / n
    best = None
    for k in range(n):
        shifted = np.roll(b, -k)
        c = np.sum(a * np.conj(shifted))
        cost = (np.sum(np.abs(a) ** 2) + np.sum(np.abs(b) ** 2)
                - 2.0 * np.abs(c)) * ds
        if best is None or cost < best[2] - 1e-15:
            angle = float(np.angle(c)) if np.abs(c) > 0 else 0.0
            best = (k, angle, float(cost))
    return best


def classical_mds_2d(dist: np.ndarray) -> np.ndarray:
    """Textbook classical scaling of a squared-distance matrix."""
    n = dist.shape[0]
    j = np.eye(n) - np.ones((n, n)) / n
    gram = -0.5 * j @ (dist ** 2) @ j
    evals, evecs = np.linalg.eigh(gram)
    order = np.argsort(evals)[::-1]
    coords = np.zeros((n, 2))
    for axis in range(2):
        lam = evals[order[axis]]
        if lam > 0:
            coords[:, axis] = evecs[:, order[axis]] * np.sqrt(lam)
    return coords


def flood_fill_components(mask: np.ndarray):
    """4-connected components by BFS; returns a list of pixel-index sets."""
    mask = np.asarray(mask).astype(bool)
    seen = np.zeros_like(mask)
    comps = []
    h, w = mask.shape
    for r0 in range(h):
        for c0 in range(w):
            if not mask[r0, c0] or seen[r0, c0]:
                continue
            queue = [(r0, c0)]
            seen[r0, c0] = True
            comp = set()
            while queue:
                r, c = queue.pop()
                comp.add((r, c))
                for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                    rr, cc = r + dr, c + dc
                    if 0 <= rr < h and 0 <= cc < w and mask[rr, cc] and not seen[rr, cc]:
                        seen[rr, cc] = True
                        queue.append((rr, cc))
            comps.append(comp)
    return comps


def point_in_polygon(point, polygon: np.ndarray) -> bool:
    """Crossing-number test with a horizontal ray, half-open edge rule."""
    x, y = point
    inside = False
    n = len(polygon)
    for i in range(n):
        x1, y1 = polygon[i]
        x2, y2 = polygon[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            x_cross = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if x < x_cross:
                inside = not inside
    return inside
