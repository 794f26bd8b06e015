"""Weighted pose graphs, shortest paths, and hop-limited ego subgraphs.

Distances are weighted by per-edge Euclidean length; ego-graph radii count
unweighted hops.  Shortest paths inside an ego graph are confined to the
induced subgraph, so a path may not shortcut through vertices outside the
ball.  ``all_pairs_oracle`` is an exhaustive Floyd-Warshall reference kept
deliberately independent of the Dijkstra production path.
"""
from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .errors import PoseWeightsError
from .skeleton import Skeleton

__all__ = [
    "UNREACHABLE",
    "WeightedPoseGraph",
    "attach_lengths",
    "DistanceRow",
    "EgoGraph",
    "shortest_paths_from",
    "all_pairs_oracle",
    "ego_graph",
]

UNREACHABLE = float("inf")

# Floyd-Warshall is O(n^3); it exists as a test oracle, not a production path.
ORACLE_MAX_VERTICES = 64


class WeightedPoseGraph:
    """A skeleton with one strictly positive length per edge.

    Immutable after construction.  The CSR adjacency (each undirected edge
    stored in both directions) is built once and shared read-only with the
    kernel backends.
    """

    def __init__(self, skeleton: Skeleton, edge_lengths: Sequence[float]):
        lengths = np.asarray(edge_lengths, dtype=np.float64)
        if lengths.shape != (skeleton.num_edges,):
            raise PoseWeightsError(
                f"expected {skeleton.num_edges} edge lengths, got {lengths.shape}"
            )
        bad = ~(np.isfinite(lengths) & (lengths > 0.0))
        if np.any(bad):
            e = skeleton.edges[int(np.argmax(bad))]
            raise PoseWeightsError(
                f"edge {skeleton.edge_name(e)} has non-positive or non-finite "
                f"length {lengths[np.argmax(bad)]}"
            )
        self.skeleton = skeleton
        self.edge_lengths = lengths
        n = skeleton.num_keypoints
        degree = np.zeros(n, dtype=np.int32)
        for e in skeleton.edges:
            degree[e.a] += 1
            degree[e.b] += 1
        indptr = np.zeros(n + 1, dtype=np.int32)
        np.cumsum(degree, out=indptr[1:])
        indices = np.empty(2 * skeleton.num_edges, dtype=np.int32)
        csr_lengths = np.empty(2 * skeleton.num_edges, dtype=np.float64)
        cursor = indptr[:-1].copy()
        for e, w in zip(skeleton.edges, lengths):
            indices[cursor[e.a]] = e.b
            csr_lengths[cursor[e.a]] = w
            cursor[e.a] += 1
            indices[cursor[e.b]] = e.a
            csr_lengths[cursor[e.b]] = w
            cursor[e.b] += 1
        self._indptr = indptr
        self._indices = indices
        self._csr_lengths = csr_lengths
        self._full_mask = np.ones(n, dtype=np.uint8)
        for arr in (self.edge_lengths, indptr, indices, csr_lengths, self._full_mask):
            arr.flags.writeable = False

    @property
    def num_vertices(self) -> int:
        return self.skeleton.num_keypoints

    @property
    def num_edges(self) -> int:
        return self.skeleton.num_edges

    @classmethod
    def with_unit_lengths(cls, skeleton: Skeleton) -> "WeightedPoseGraph":
        return cls(skeleton, np.ones(skeleton.num_edges))

    def scaled(self, factor: float) -> "WeightedPoseGraph":
        """Same topology with every edge length multiplied by factor."""
        return WeightedPoseGraph(self.skeleton, self.edge_lengths * factor)


def attach_lengths(
    skeleton: Skeleton, lengths: Mapping[tuple[str, str], float]
) -> WeightedPoseGraph:
    """Bind a name-pair -> length map to a skeleton's edge set.

    The map must cover exactly the skeleton's edges; pair orientation does
    not matter.  Values must be strictly positive and finite.
    """
    resolved: dict[tuple[int, int], float] = {}
    for (a, b), value in lengths.items():
        ia, ib = skeleton.index_of(a), skeleton.index_of(b)
        key = (min(ia, ib), max(ia, ib))
        if key in resolved:
            raise PoseWeightsError(f"edge ({a!r}, {b!r}) listed twice in length map")
        resolved[key] = float(value)
    edge_keys = {(e.a, e.b) for e in skeleton.edges}
    extra = set(resolved) - edge_keys
    if extra:
        ia, ib = sorted(extra)[0]
        raise PoseWeightsError(
            f"length given for ({skeleton.keypoints[ia].name!r}, "
            f"{skeleton.keypoints[ib].name!r}), which is not a skeleton edge"
        )
    missing = edge_keys - set(resolved)
    if missing:
        ia, ib = sorted(missing)[0]
        raise PoseWeightsError(
            f"no length given for edge ({skeleton.keypoints[ia].name!r}, "
            f"{skeleton.keypoints[ib].name!r})"
        )
    ordered = [resolved[(e.a, e.b)] for e in skeleton.edges]
    return WeightedPoseGraph(skeleton, ordered)


@dataclass(frozen=True, eq=False)
class DistanceRow:
    """Shortest-path distances from one source vertex.

    ``vertices`` lists the vertex indices (of the parent graph) aligned
    with ``distances``; unreachable vertices hold ``UNREACHABLE``.
    """

    source: int
    vertices: tuple[int, ...]
    distances: np.ndarray

    def distance_to(self, vertex: int) -> float:
        return float(self.distances[self.vertices.index(vertex)])


@dataclass(frozen=True, eq=False)
class EgoGraph:
    """Induced subgraph on the <= radius hop ball around a center vertex."""

    graph: WeightedPoseGraph = field(repr=False)
    center: int
    radius: int
    vertices: tuple[int, ...]
    edge_indices: tuple[int, ...]
    member_mask: np.ndarray = field(repr=False)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        skeleton_edges = self.graph.skeleton.edges
        return tuple((skeleton_edges[i].a, skeleton_edges[i].b) for i in self.edge_indices)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)


def ego_graph(graph: WeightedPoseGraph, center: int, radius: int) -> EgoGraph:
    """Hop-ball subgraph: all vertices reachable from center within `radius` edges.

    Hops ignore edge lengths; only the count of traversed edges matters.
    """
    _check_vertex(graph, center)
    if radius < 0:
        raise PoseWeightsError(f"ego radius must be >= 0, got {radius}")
    mask = _kernels.hop_ball_csr(graph._indptr, graph._indices, center, radius)
    mask.flags.writeable = False
    members = tuple(int(v) for v in np.nonzero(mask)[0])
    edge_indices = tuple(
        i
        for i, e in enumerate(graph.skeleton.edges)
        if mask[e.a] and mask[e.b]
    )
    return EgoGraph(graph, center, radius, members, edge_indices, mask)


def shortest_paths_from(
    view: WeightedPoseGraph | EgoGraph, source: int
) -> DistanceRow:
    """Exact single-source shortest-path distances under edge-length weights.

    For an EgoGraph view the source must be a member, and paths are
    restricted to the induced subgraph.
    """
    if isinstance(view, EgoGraph):
        graph, mask = view.graph, view.member_mask
        _check_vertex(graph, source)
        if not mask[source]:
            raise PoseWeightsError(
                f"source vertex {source} is not a member of the ego graph "
                f"around {view.center}"
            )
        vertices = view.vertices
    else:
        graph, mask = view, view._full_mask
        _check_vertex(graph, source)
        vertices = tuple(range(graph.num_vertices))
    dist = _kernels.dijkstra_csr(
        graph._indptr, graph._indices, graph._csr_lengths, source, mask
    )
    if isinstance(view, EgoGraph):
        dist = dist[list(vertices)]
    dist.flags.writeable = False
    return DistanceRow(source=source, vertices=vertices, distances=dist)


def all_pairs_oracle(view: WeightedPoseGraph | EgoGraph) -> np.ndarray:
    """All-pairs distances by exhaustive Floyd-Warshall relaxation.

    Test-scale only (<= ORACLE_MAX_VERTICES vertices).  Rows and columns
    follow the view's vertex order; entries are UNREACHABLE where no path
    exists.
    """
    if isinstance(view, EgoGraph):
        vertices = view.vertices
        local = {v: i for i, v in enumerate(vertices)}
        skeleton_edges = view.graph.skeleton.edges
        pairs = [
            (local[skeleton_edges[i].a], local[skeleton_edges[i].b],
             view.graph.edge_lengths[i])
            for i in view.edge_indices
        ]
    else:
        vertices = tuple(range(view.num_vertices))
        pairs = [
            (e.a, e.b, w) for e, w in zip(view.skeleton.edges, view.edge_lengths)
        ]
    k = len(vertices)
    if k > ORACLE_MAX_VERTICES:
        raise PoseWeightsError(
            f"oracle limited to {ORACLE_MAX_VERTICES} vertices, got {k}"
        )
    dist = np.full((k, k), UNREACHABLE)
    np.fill_diagonal(dist, 0.0)
    for a, b, w in pairs:
        if w < dist[a, b]:
            dist[a, b] = dist[b, a] = w
    for mid in range(k):
        np.minimum(dist, dist[:, mid : mid + 1] + dist[mid : mid + 1, :], out=dist)
    return dist


def _check_vertex(graph: WeightedPoseGraph, vertex: int) -> None:
    if not isinstance(vertex, (int, np.integer)) or not (0 <= vertex < graph.num_vertices):
        raise PoseWeightsError(
            f"vertex index {vertex!r} out of range for a graph with "
            f"{graph.num_vertices} vertices"
        )
