"""Harmonic centrality and its inverse, plus closeness for comparison.

For a vertex v, the harmonic centrality is H(v) = sum over reachable
u != v of 1/d(v, u), and h(v) = 1/H(v) is the per-vertex score the
weighting schemes consume.  A vertex embedded in a tight cluster has many
short paths, a large H, and therefore a small h; a peripheral vertex gets
a large h.

The "ego" scope recomputes shortest paths per vertex on the induced
hop-ball around that vertex (default radius 3), so paths may not leave
the ball.  Unreachable vertices contribute 0 to H.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import DegenerateScopeError, PoseWeightsError
from .graphs import EgoGraph, WeightedPoseGraph, ego_graph

__all__ = [
    "CentralityReport",
    "harmonic_h",
    "closeness",
    "centrality_report",
]

MEASURES = ("harmonic", "closeness")


@dataclass(frozen=True, eq=False)
class CentralityReport:
    """Per-vertex centrality values for one measure and scope.

    For the harmonic measure, ``values`` holds H and ``inverse`` holds
    h = 1/H; for closeness, ``values`` holds the closeness and
    ``inverse`` is None.  ``egos`` carries the per-vertex ego subgraphs
    when the scope is ego and they were requested.
    """

    measure: str
    scope: str
    values: np.ndarray
    inverse: np.ndarray | None
    egos: tuple[EgoGraph, ...] | None = field(default=None, repr=False)


def _scope_distances(graph: WeightedPoseGraph, vertex: int, radius: int | None):
    """(mask, distances over parent indices) for the scoped subgraph at vertex."""
    if radius is None:
        mask = graph._full_mask
    else:
        if radius < 1:
            raise PoseWeightsError(f"ego scope requires radius >= 1, got {radius}")
        mask = _kernels.hop_ball_csr(graph._indptr, graph._indices, vertex, radius)
    dist = _kernels.dijkstra_csr(
        graph._indptr, graph._indices, graph._csr_lengths, vertex, mask
    )
    return mask, dist


def harmonic_h(
    graph: WeightedPoseGraph, vertex: int, radius: int | None = None
) -> tuple[float, float]:
    """(H, h) for one vertex; ``radius=None`` means the whole graph.

    H sums reciprocal shortest-path distances to every other reachable
    vertex of the scope; h = 1/H.  Raises DegenerateScopeError when no
    other vertex is reachable (H would be 0).
    """
    if vertex < 0 or vertex >= graph.num_vertices:
        raise PoseWeightsError(f"vertex index {vertex} out of range")
    _, dist = _scope_distances(graph, vertex, radius)
    finite = dist[np.isfinite(dist) & (dist > 0.0)]
    H = float(np.sum(1.0 / finite))
    if H == 0.0:
        raise DegenerateScopeError(
            f"vertex {vertex} is isolated within scope "
            f"{'global' if radius is None else f'ego({radius})'}"
        )
    return H, 1.0 / H


def closeness(
    graph: WeightedPoseGraph, vertex: int, radius: int | None = None
) -> float:
    """Classical closeness (n_scope - 1) / sum of distances on the scoped graph.

    Requires the scope to be connected from the vertex; an unreachable
    scope member makes the sum infinite and raises DegenerateScopeError.
    """
    if vertex < 0 or vertex >= graph.num_vertices:
        raise PoseWeightsError(f"vertex index {vertex} out of range")
    mask, dist = _scope_distances(graph, vertex, radius)
    members = dist[mask.astype(bool)]
    if members.size < 2 or not np.all(np.isfinite(members)):
        raise DegenerateScopeError(
            f"closeness undefined at vertex {vertex}: scope is disconnected "
            "or contains no other vertex"
        )
    return float((members.size - 1) / np.sum(members))


def centrality_report(
    graph: WeightedPoseGraph,
    measure: str = "harmonic",
    radius: int | None = None,
    include_egos: bool = True,
) -> CentralityReport:
    """Per-vertex centralities; in ego scope each vertex uses its own ball.

    ``include_egos=False`` skips materializing the per-vertex ego
    subgraph objects (the values are unaffected).
    """
    if measure not in MEASURES:
        raise PoseWeightsError(f"unknown centrality measure {measure!r}")
    n = graph.num_vertices
    values = np.empty(n, dtype=np.float64)
    for v in range(n):
        if measure == "harmonic":
            values[v], _ = harmonic_h(graph, v, radius)
        else:
            values[v] = closeness(graph, v, radius)
    inverse = 1.0 / values if measure == "harmonic" else None
    egos = None
    if radius is not None and include_egos:
        egos = tuple(ego_graph(graph, v, radius) for v in range(n))
    scope = "global" if radius is None else f"ego({radius})"
    return CentralityReport(measure, scope, values, inverse, egos)
