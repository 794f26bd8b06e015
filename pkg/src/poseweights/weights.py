"""Keypoint and connection training weights from per-vertex centrality.

Four schemes:

* ``local``  — h from each vertex's own ego graph (default radius 3);
* ``global`` — h from the whole graph;
* ``equal``  — every keypoint scores 1;
* ``crafted`` — the skeleton's hand-set per-keypoint multipliers.

Vertex weights are the per-vertex scores normalized so they sum to the
number of keypoints.  A connection's raw weight is the max of its two
endpoint scores, normalized so edge weights sum to the number of
connections.  The normalizations make schemes directly comparable and
cancel any uniform scaling of the edge lengths.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .centrality import centrality_report
from .errors import PoseWeightsError
from .graphs import WeightedPoseGraph

__all__ = [
    "SCHEMES",
    "DEFAULT_EGO_RADIUS",
    "WeightTable",
    "SchemeComparison",
    "vertex_scores",
    "vertex_weights",
    "edge_weights",
    "build_weight_table",
    "compare_schemes",
]

SCHEMES = ("local", "global", "equal", "crafted")
DEFAULT_EGO_RADIUS = 3

_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class WeightTable:
    """Normalized per-keypoint and per-connection weights under one scheme."""

    scheme: str
    radius: int | None
    vertex_weights: np.ndarray
    edge_weights: np.ndarray

    def summary(self) -> dict:
        """Min/max/ratio statistics over both weight sets."""
        def stats(w):
            lo, hi = float(np.min(w)), float(np.max(w))
            return {"min": lo, "max": hi, "ratio": hi / lo}

        return {"vertex": stats(self.vertex_weights), "edge": stats(self.edge_weights)}


def vertex_scores(
    graph: WeightedPoseGraph, scheme: str, radius: int = DEFAULT_EGO_RADIUS
) -> np.ndarray:
    """Raw (un-normalized) per-vertex scores the scheme is built on."""
    if scheme == "local":
        report = centrality_report(graph, "harmonic", radius=radius, include_egos=False)
        return report.inverse
    if scheme == "global":
        report = centrality_report(graph, "harmonic", radius=None, include_egos=False)
        return report.inverse
    if scheme == "equal":
        return np.ones(graph.num_vertices)
    if scheme == "crafted":
        return np.asarray(graph.skeleton.crafted_multipliers(), dtype=np.float64)
    raise PoseWeightsError(f"unknown weighting scheme {scheme!r}")


def vertex_weights(
    graph: WeightedPoseGraph, scheme: str, radius: int = DEFAULT_EGO_RADIUS
) -> np.ndarray:
    """Per-keypoint weights, normalized to sum to the keypoint count."""
    scores = vertex_scores(graph, scheme, radius)
    return scores * (graph.num_vertices / scores.sum())


def edge_weights(graph: WeightedPoseGraph, scores: np.ndarray) -> np.ndarray:
    """Per-connection weights from per-vertex scores.

    raw_ij = max(score_i, score_j), then normalized to sum to the edge
    count.  Uniform scaling of the scores cancels, so raw h values and
    normalized vertex weights give identical results.
    """
    edges = graph.skeleton.edges
    a = np.fromiter((e.a for e in edges), dtype=np.int64, count=len(edges))
    b = np.fromiter((e.b for e in edges), dtype=np.int64, count=len(edges))
    raw = np.maximum(scores[a], scores[b])
    return raw * (graph.num_edges / raw.sum())


def build_weight_table(
    graph: WeightedPoseGraph, scheme: str, radius: int = DEFAULT_EGO_RADIUS
) -> WeightTable:
    """Vertex and edge weights for one scheme, validated against the
    normalization invariants before returning."""
    scores = vertex_scores(graph, scheme, radius)
    vw = scores * (graph.num_vertices / scores.sum())
    ew = edge_weights(graph, scores)
    _validate_table(graph, vw, ew)
    return WeightTable(
        scheme=scheme,
        radius=radius if scheme == "local" else None,
        vertex_weights=vw,
        edge_weights=ew,
    )


def _validate_table(graph, vw, ew):
    n, m = graph.num_vertices, graph.num_edges
    if abs(vw.sum() - n) > _SUM_TOLERANCE:
        raise PoseWeightsError(f"vertex weights sum to {vw.sum()}, expected {n}")
    if abs(ew.sum() - m) > _SUM_TOLERANCE:
        raise PoseWeightsError(f"edge weights sum to {ew.sum()}, expected {m}")
    if np.any(vw <= 0) or np.any(ew <= 0):
        raise PoseWeightsError("weight table contains non-positive weights")
    vw.flags.writeable = False
    ew.flags.writeable = False


@dataclass(frozen=True, eq=False)
class SchemeComparison:
    """All four weight tables for one graph, for side-by-side inspection."""

    tables: dict[str, WeightTable]

    def summaries(self) -> dict[str, dict]:
        return {scheme: table.summary() for scheme, table in self.tables.items()}


def compare_schemes(
    graph: WeightedPoseGraph, radius: int = DEFAULT_EGO_RADIUS
) -> SchemeComparison:
    """Weight tables for every scheme plus min/max/ratio summaries."""
    return SchemeComparison(
        tables={s: build_weight_table(graph, s, radius) for s in SCHEMES}
    )
