"""Isomap projection of a shape path to 2D.

Pairwise geodesic shape distances feed a symmetric k-nearest-neighbor
graph; all-pairs shortest paths over that graph are embedded by classical
MDS (double centering of the squared distances, top-2 eigenpairs).  The
reported stress is the Kruskal-style normalized residual
sqrt(sum (d_graph - d_embedded)^2 / sum d_graph^2), so no embedded
distance can overshoot its graph distance by more than
stress * sqrt(sum d_graph^2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components, shortest_path

from .errors import DisconnectedGraph, TooFewFrames
from .parallel import map_ordered
from .srv import ShapePath, geodesic_distance


@dataclass
class Embedding2D:
    """Centered per-frame 2D coordinates plus the residual stress."""

    coords: np.ndarray  # (n_frames, 2)
    stress: float


def pairwise_distances(path: ShapePath) -> np.ndarray:
    """Symmetric matrix of geodesic shape distances between all frames."""
    n = len(path)
    dist = np.zeros((n, n))

    def row(i: int) -> np.ndarray:
        out = np.zeros(n)
        for j in range(i + 1, n):
            out[j] = geodesic_distance(path.shapes[i], path.shapes[j])
        return out

    rows = map_ordered(row, range(n))
    for i, r in enumerate(rows):
        dist[i, i + 1:] = r[i + 1:]
    return dist + dist.T


def _knn_graph_distances(dist: np.ndarray, k: int) -> np.ndarray:
    """All-pairs shortest paths over the symmetric k-NN graph."""
    n = dist.shape[0]
    order = np.argsort(dist, axis=1, kind="stable")
    edges = np.zeros((n, n), dtype=bool)
    for i in range(n):
        neighbors = [j for j in order[i] if j != i][:k]
        edges[i, neighbors] = True
    edges |= edges.T

    adjacency = csr_matrix(edges)
    n_comp, labels = connected_components(adjacency, directed=False)
    if n_comp > 1:
        sizes = np.bincount(labels)
        raise DisconnectedGraph(
            f"k-NN graph has {n_comp} components (sizes {sizes.tolist()}); "
            "raise k",
            labels=labels,
        )
    # masked array keeps explicit zero-weight edges (identical shapes) alive
    graph = np.ma.masked_array(dist, mask=~edges)
    return shortest_path(graph, method="D", directed=False)


def _classical_mds_2d(dist: np.ndarray) -> np.ndarray:
    n = dist.shape[0]
    centering = np.eye(n) - np.full((n, n), 1.0 / n)
    gram = -0.5 * centering @ (dist**2) @ centering
    eigvals, eigvecs = np.linalg.eigh(gram)
    order = np.argsort(eigvals)[::-1][:2]
    coords = np.zeros((n, 2))
    for axis, idx in enumerate(order):
        lam = eigvals[idx]
        if lam > 0:
            coords[:, axis] = eigvecs[:, idx] * np.sqrt(lam)
    return coords


def _fix_signs(coords: np.ndarray) -> np.ndarray:
    for axis in range(coords.shape[1]):
        column = coords[:, axis]
        nonzero = np.nonzero(np.abs(column) > 0)[0]
        anchor = column[0] if abs(column[0]) > 0 else (
            column[nonzero[0]] if nonzero.size else 0.0
        )
        if anchor < 0:
            coords[:, axis] = -column
    return coords


def isomap_embed(path: ShapePath, k: int | None = None) -> Embedding2D:
    """Project a shape path to 2D trajectory coordinates.

    ``k`` defaults to min(6, n_frames - 1).  A path of identical shapes
    embeds to all-zero coordinates with stress 0; a disconnected
    neighborhood graph raises ``DisconnectedGraph`` carrying the component
    labels.
    """
    n = len(path)
    if n < 3:
        raise TooFewFrames(f"need >= 3 frames, got {n}")
    if k is None:
        k = min(6, n - 1)
    if not 2 <= k < n:
        raise ValueError(f"k must satisfy 2 <= k < {n}, got {k}")

    dist = pairwise_distances(path)
    if dist.max() < 1e-12:
        return Embedding2D(np.zeros((n, 2)), 0.0)

    graph_dist = _knn_graph_distances(dist, k)
    coords = _fix_signs(_classical_mds_2d(graph_dist))
    coords -= coords.mean(axis=0)

    delta = coords[:, None, :] - coords[None, :, :]
    emb_dist = np.sqrt((delta**2).sum(axis=2))
    iu = np.triu_indices(n, 1)
    denom = float((graph_dist[iu] ** 2).sum())
    stress = float(
        np.sqrt(((graph_dist[iu] - emb_dist[iu]) ** 2).sum() / denom)
    ) if denom > 0 else 0.0
    return Embedding2D(coords, stress)


def trajectory_length(embedding: Embedding2D) -> float:
    """Sum of consecutive embedded gaps along the time order."""
    steps = np.diff(embedding.coords, axis=0)
    return float(np.linalg.norm(steps, axis=1).sum())


def embedding_svg(embedding: Embedding2D, times=None, size: int = 640) -> str:
    """Minimal SVG polyline of the trajectory with per-frame time markers."""
    coords = embedding.coords
    n = coords.shape[0]
    if times is None:
        times = np.arange(n)
    span = max(float(np.abs(coords).max()), 1e-12)
    margin = 60.0
    scale = (size - 2 * margin) / (2 * span)

    def sx(v: float) -> float:
        return margin + (v + span) * scale

    def sy(v: float) -> float:
        return size - margin - (v + span) * scale  # y up

    pts = " ".join(f"{sx(x):.2f},{sy(y):.2f}" for x, y in coords)
    stride = max(1, int(np.ceil(n / 24)))
    labels = []
    for i in range(0, n, stride):
        x, y = coords[i]
        labels.append(
            f'<text x="{sx(x) + 6:.2f}" y="{sy(y) - 6:.2f}" '
            f'font-size="11" fill="#444">{int(times[i])}</text>'
        )
    circles = "".join(
        f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="3" fill="#1f6fb2"/>'
        for x, y in coords
    )
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" '
        f'height="{size}" viewBox="0 0 {size} {size}">\n'
        f'<rect width="{size}" height="{size}" fill="white"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" '
        f'stroke-width="1.5"/>\n'
        f"{circles}\n{''.join(labels)}\n</svg>\n"
    )
