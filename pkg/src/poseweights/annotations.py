"""COCO-style keypoint annotation parsing and per-edge length statistics.

The input layout is an ``annotations`` array whose entries carry a flat
``keypoints`` array of 3*n numbers (x, y, visibility per keypoint, with
visibility 0 = unlabeled, 1 = labeled but occluded, 2 = labeled and
visible) and an optional ``bbox`` [x, y, w, h].

An edge accumulates the Euclidean distance between its two endpoints for
every instance where BOTH endpoints have visibility > 0.  In
``scale_normalized`` mode each contributing distance is divided by the
square root of the instance's bbox area first, removing instance-scale
bias; ``raw`` keeps plain pixel distances.  Per-edge sums use Kahan
compensation, so permuting the corpus changes no mean beyond 1e-12
relative.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import AnnotationError, CoverageError
from .skeleton import Skeleton

__all__ = [
    "MODES",
    "InstanceAnnotation",
    "AnnotationCorpus",
    "EdgeLengthStats",
    "parse_annotations",
    "load_annotations",
    "compute_edge_lengths",
    "stats_to_lengths",
    "stats_to_document",
    "parse_length_stats",
]

MODES = ("raw", "scale_normalized")

# Degenerate all-zero means are clamped to this fraction of the largest mean.
ZERO_LENGTH_EPSILON = 1e-6


@dataclass(frozen=True, eq=False)
class InstanceAnnotation:
    """One annotated object instance: per-keypoint (x, y, visibility) rows."""

    entry_id: int | None
    keypoints: np.ndarray  # shape (n, 3), float64
    bbox: tuple[float, float, float, float] | None = None


@dataclass(frozen=True, eq=False)
class AnnotationCorpus:
    """Parsed instances, all matching one skeleton's keypoint count."""

    num_keypoints: int
    instances: tuple[InstanceAnnotation, ...]

    def __len__(self) -> int:
        return len(self.instances)


@dataclass(frozen=True, eq=False)
class EdgeLengthStats:
    """Per-edge contribution count and arithmetic-mean distance.

    ``mean_lengths`` holds 0.0 for uncovered edges (count 0); query
    ``uncovered`` for the flags.
    """

    counts: np.ndarray  # int64 per edge
    mean_lengths: np.ndarray  # float64 per edge

    @property
    def uncovered(self) -> np.ndarray:
        return self.counts == 0

    @property
    def num_covered(self) -> int:
        return int(np.count_nonzero(self.counts > 0))


def parse_annotations(document: str | bytes | dict, skeleton: Skeleton) -> AnnotationCorpus:
    """Parse a COCO-style annotation document against a skeleton.

    Every entry must carry exactly 3 * num_keypoints numbers; an empty
    ``annotations`` array yields an empty corpus.
    """
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise AnnotationError(f"annotation document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "annotations" not in document:
        raise AnnotationError("annotation document must carry an 'annotations' array")
    entries = document["annotations"]
    if not isinstance(entries, list):
        raise AnnotationError("'annotations' must be an array")

    n = skeleton.num_keypoints
    instances = []
    for pos, entry in enumerate(entries):
        entry_id = entry.get("id", pos) if isinstance(entry, dict) else pos
        if not isinstance(entry, dict) or "keypoints" not in entry:
            raise AnnotationError(f"annotation entry {entry_id} has no 'keypoints'")
        flat = entry["keypoints"]
        if not isinstance(flat, list):
            raise AnnotationError(f"annotation entry {entry_id}: 'keypoints' must be an array")
        if len(flat) != 3 * n:
            raise AnnotationError(
                f"annotation entry {entry_id} carries {len(flat)} keypoint "
                f"numbers, expected {3 * n} for a {n}-keypoint skeleton"
            )
        rows = np.asarray(flat, dtype=np.float64).reshape(n, 3)
        vis = rows[:, 2]
        if not np.all(np.isin(vis, (0.0, 1.0, 2.0))):
            bad = vis[~np.isin(vis, (0.0, 1.0, 2.0))][0]
            raise AnnotationError(
                f"annotation entry {entry_id} has invalid visibility flag {bad}"
            )
        labeled = vis > 0
        if not np.all(np.isfinite(rows[labeled, :2])):
            raise AnnotationError(
                f"annotation entry {entry_id} has non-finite coordinates on a "
                "labeled keypoint"
            )
        bbox = entry.get("bbox")
        if bbox is not None:
            if len(bbox) != 4:
                raise AnnotationError(f"annotation entry {entry_id} has a malformed bbox")
            bbox = tuple(float(v) for v in bbox)
        rows.flags.writeable = False
        instances.append(InstanceAnnotation(entry_id, rows, bbox))
    return AnnotationCorpus(num_keypoints=n, instances=tuple(instances))


def load_annotations(path: str | Path, skeleton: Skeleton) -> AnnotationCorpus:
    return parse_annotations(Path(path).read_text(), skeleton)


def compute_edge_lengths(
    corpus: AnnotationCorpus, skeleton: Skeleton, mode: str = "raw"
) -> EdgeLengthStats:
    """Average per-edge endpoint distances over all contributing instances.

    An instance contributes to an edge only when both endpoints have
    visibility > 0.  In ``scale_normalized`` mode every contributing
    instance must carry a bbox with positive area.
    """
    if mode not in MODES:
        raise AnnotationError(f"unknown averaging mode {mode!r}")
    if corpus.num_keypoints != skeleton.num_keypoints:
        raise AnnotationError(
            f"corpus was parsed against {corpus.num_keypoints} keypoints, "
            f"skeleton has {skeleton.num_keypoints}"
        )
    if len(corpus) == 0:
        raise AnnotationError("cannot average edge lengths over an empty corpus")

    m = skeleton.num_edges
    ea = np.fromiter((e.a for e in skeleton.edges), dtype=np.int64, count=m)
    eb = np.fromiter((e.b for e in skeleton.edges), dtype=np.int64, count=m)
    sums = np.zeros(m)
    comp = np.zeros(m)  # Kahan compensation per edge
    counts = np.zeros(m, dtype=np.int64)

    for inst in corpus.instances:
        vis = inst.keypoints[:, 2]
        valid = (vis[ea] > 0) & (vis[eb] > 0)
        if not valid.any():
            continue
        xy = inst.keypoints[:, :2]
        delta = xy[ea] - xy[eb]
        dist = np.hypot(delta[:, 0], delta[:, 1])
        if mode == "scale_normalized":
            if inst.bbox is None:
                raise AnnotationError(
                    f"annotation entry {inst.entry_id} has no bbox; "
                    "scale_normalized averaging requires one"
                )
            area = inst.bbox[2] * inst.bbox[3]
            if not (area > 0 and math.isfinite(area)):
                raise AnnotationError(
                    f"annotation entry {inst.entry_id} has bbox area {area}"
                )
            dist = dist / math.sqrt(area)
        dist = np.where(valid, dist, 0.0)
        y = np.where(valid, dist - comp, 0.0)
        t = sums + y
        comp = np.where(valid, (t - sums) - y, comp)
        sums = t
        counts += valid

    if not np.any(counts > 0):
        raise CoverageError("no edge received any contribution from the corpus")
    means = np.zeros(m)
    covered = counts > 0
    means[covered] = sums[covered] / counts[covered]
    return EdgeLengthStats(counts=counts, mean_lengths=means)


def stats_to_lengths(
    stats: EdgeLengthStats, skeleton: Skeleton, fallback: float | None = None
) -> dict[tuple[str, str], float]:
    """Edge-name-pair -> positive length map ready for ``attach_lengths``.

    Uncovered edges take ``fallback`` when given, otherwise they are an
    error.  Zero means (coincident points across the whole corpus) are
    clamped to ZERO_LENGTH_EPSILON of the largest mean so downstream
    shortest-path math keeps strictly positive lengths.
    """
    if fallback is not None and not (fallback > 0 and math.isfinite(fallback)):
        raise CoverageError(f"fallback length must be positive and finite, got {fallback}")
    positive = stats.mean_lengths[(stats.counts > 0) & (stats.mean_lengths > 0)]
    if positive.size == 0 and fallback is None:
        raise CoverageError("all measured mean lengths are zero; corpus is degenerate")
    clamp = ZERO_LENGTH_EPSILON * (positive.max() if positive.size else fallback)

    result: dict[tuple[str, str], float] = {}
    for i, edge in enumerate(skeleton.edges):
        name = skeleton.edge_name(edge)
        if stats.counts[i] == 0:
            if fallback is None:
                raise CoverageError(
                    f"edge {name} has no annotation coverage and no fallback was given"
                )
            result[name] = fallback
        else:
            result[name] = max(float(stats.mean_lengths[i]), clamp)
    return result


def stats_to_document(
    stats: EdgeLengthStats,
    skeleton: Skeleton,
    mode: str,
    num_instances: int,
    metadata: dict | None = None,
) -> dict:
    """JSON-serializable form of edge-length statistics."""
    doc = {
        "skeleton": skeleton.name,
        "mode": mode,
        "num_instances": num_instances,
        "edges": [
            {
                "edge": list(skeleton.edge_name(e)),
                "count": int(stats.counts[i]),
                "mean_length": float(stats.mean_lengths[i]),
            }
            for i, e in enumerate(skeleton.edges)
        ],
    }
    if metadata is not None:
        doc = {"metadata": metadata, **doc}
    return doc


def parse_length_stats(document: str | bytes | dict, skeleton: Skeleton) -> EdgeLengthStats:
    """Read an edge-length statistics document back against a skeleton."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise AnnotationError(f"statistics document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "edges" not in document:
        raise AnnotationError("statistics document must carry an 'edges' array")
    by_name: dict[tuple[str, str], tuple[int, float]] = {}
    for entry in document["edges"]:
        a, b = entry["edge"]
        key = _normalize_pair(skeleton, a, b)
        if key in by_name:
            raise AnnotationError(f"statistics list edge ({a!r}, {b!r}) twice")
        by_name[key] = (int(entry["count"]), float(entry["mean_length"]))
    counts = np.zeros(skeleton.num_edges, dtype=np.int64)
    means = np.zeros(skeleton.num_edges)
    for i, edge in enumerate(skeleton.edges):
        key = (edge.a, edge.b)
        if key not in by_name:
            raise AnnotationError(
                f"statistics document is missing edge {skeleton.edge_name(edge)}"
            )
        counts[i], means[i] = by_name.pop(key)
    if by_name:
        ia, ib = next(iter(by_name))
        raise AnnotationError(
            f"statistics document carries unknown edge "
            f"({skeleton.keypoints[ia].name!r}, {skeleton.keypoints[ib].name!r})"
        )
    return EdgeLengthStats(counts=counts, mean_lengths=means)


def _normalize_pair(skeleton: Skeleton, a: str, b: str) -> tuple[int, int]:
    ia, ib = skeleton.index_of(a), skeleton.index_of(b)
    return (min(ia, ib), max(ia, ib))
