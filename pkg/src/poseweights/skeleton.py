"""Pose-skeleton data model and its JSON file format.

A skeleton file is a JSON document with three top-level fields::

    {
      "name": "wholebody",
      "keypoints": [{"name": "nose"},
                    {"name": "left_ankle", "crafted_multiplier": 3.0},
                    ...],
      "edges": [["nose", "left_eye"], ...]
    }

Keypoints are referenced by name in files; indices are assigned from list
order.  ``crafted_multiplier`` is optional (default 1.0) and feeds the
hand-tuned weighting scheme.  Skeletons must be connected, free of
self-loops and duplicate edges, and have unique keypoint names.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .errors import SkeletonError

__all__ = [
    "KeypointDef",
    "EdgeDef",
    "Skeleton",
    "parse_skeleton",
    "serialize_skeleton",
    "load_skeleton",
]


@dataclass(frozen=True)
class KeypointDef:
    """A named keypoint; ``index`` is its 0-based position in the skeleton."""

    index: int
    name: str
    crafted_multiplier: float = 1.0


@dataclass(frozen=True)
class EdgeDef:
    """Undirected connection between two keypoint indices, stored with a < b."""

    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise SkeletonError(f"self-loop edge on keypoint index {self.a}")
        if self.a > self.b:
            low, high = self.b, self.a
            object.__setattr__(self, "a", low)
            object.__setattr__(self, "b", high)


@dataclass(frozen=True)
class Skeleton:
    """Keypoints plus undirected connections defining a pose topology.

    Instances are immutable; validation happens in :func:`parse_skeleton`
    or in :meth:`validate` for programmatically built skeletons.
    """

    name: str
    keypoints: tuple[KeypointDef, ...]
    edges: tuple[EdgeDef, ...]

    @property
    def num_keypoints(self) -> int:
        return len(self.keypoints)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def keypoint_names(self) -> tuple[str, ...]:
        return tuple(k.name for k in self.keypoints)

    def index_of(self, name: str) -> int:
        try:
            return self._name_to_index[name]
        except KeyError:
            raise SkeletonError(f"unknown keypoint name {name!r}") from None

    def edge_name(self, edge: EdgeDef) -> tuple[str, str]:
        return (self.keypoints[edge.a].name, self.keypoints[edge.b].name)

    def crafted_multipliers(self) -> tuple[float, ...]:
        return tuple(k.crafted_multiplier for k in self.keypoints)

    def __post_init__(self):
        object.__setattr__(
            self, "_name_to_index", {k.name: k.index for k in self.keypoints}
        )

    def validate(self) -> "Skeleton":
        """Check all structural invariants, raising SkeletonError on the first violation."""
        n = len(self.keypoints)
        if n == 0:
            raise SkeletonError("skeleton has no keypoints")
        for i, kp in enumerate(self.keypoints):
            if kp.index != i:
                raise SkeletonError(
                    f"keypoint {kp.name!r} has index {kp.index}, expected {i}"
                )
            if not kp.name:
                raise SkeletonError(f"keypoint at index {i} has an empty name")
            if not (kp.crafted_multiplier > 0.0 and kp.crafted_multiplier < float("inf")):
                raise SkeletonError(
                    f"keypoint {kp.name!r} has non-positive crafted_multiplier "
                    f"{kp.crafted_multiplier}"
                )
        names = [k.name for k in self.keypoints]
        if len(set(names)) != n:
            dup = next(name for name in names if names.count(name) > 1)
            raise SkeletonError(f"duplicate keypoint name {dup!r}")
        seen: set[tuple[int, int]] = set()
        for e in self.edges:
            if not (0 <= e.a < n and 0 <= e.b < n):
                raise SkeletonError(f"edge ({e.a}, {e.b}) references a missing keypoint")
            key = (e.a, e.b)
            if key in seen:
                raise SkeletonError(
                    f"duplicate edge between {names[e.a]!r} and {names[e.b]!r}"
                )
            seen.add(key)
        self._check_connected()
        return self

    def _check_connected(self):
        # BFS from vertex 0; a single component is required because the
        # global centrality inverse h = 1/H is undefined for isolated parts.
        n = len(self.keypoints)
        adjacency: list[list[int]] = [[] for _ in range(n)]
        for e in self.edges:
            adjacency[e.a].append(e.b)
            adjacency[e.b].append(e.a)
        visited = [False] * n
        visited[0] = True
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for v in adjacency[u]:
                if not visited[v]:
                    visited[v] = True
                    queue.append(v)
        if not all(visited):
            missing = visited.index(False)
            raise SkeletonError(
                f"skeleton is disconnected: keypoint "
                f"{self.keypoints[missing].name!r} is unreachable from "
                f"{self.keypoints[0].name!r}"
            )


def parse_skeleton(document: str | bytes | dict) -> Skeleton:
    """Parse and validate a skeleton from JSON text or an already-decoded dict."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise SkeletonError(f"skeleton document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict):
        raise SkeletonError("skeleton document must be a JSON object")
    for field in ("name", "keypoints", "edges"):
        if field not in document:
            raise SkeletonError(f"skeleton document is missing the {field!r} field")

    keypoints = []
    for i, entry in enumerate(document["keypoints"]):
        if not isinstance(entry, dict) or "name" not in entry:
            raise SkeletonError(f"keypoint entry {i} must be an object with a 'name'")
        multiplier = entry.get("crafted_multiplier", 1.0)
        if not isinstance(multiplier, (int, float)):
            raise SkeletonError(
                f"keypoint {entry['name']!r} has a non-numeric crafted_multiplier"
            )
        keypoints.append(KeypointDef(i, str(entry["name"]), float(multiplier)))

    index = {k.name: k.index for k in keypoints}
    edges = []
    for j, pair in enumerate(document["edges"]):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise SkeletonError(f"edge entry {j} must be a two-element name pair")
        a, b = pair
        for name in (a, b):
            if name not in index:
                raise SkeletonError(
                    f"edge entry {j} references unknown keypoint {name!r}"
                )
        if index[a] == index[b]:
            raise SkeletonError(f"edge entry {j} is a self-loop on {a!r}")
        edges.append(EdgeDef(index[a], index[b]))

    return Skeleton(
        name=str(document["name"]), keypoints=tuple(keypoints), edges=tuple(edges)
    ).validate()


def serialize_skeleton(skeleton: Skeleton) -> str:
    """Render a skeleton to canonical JSON: parse(serialize(s)) == s."""
    doc = {
        "name": skeleton.name,
        "keypoints": [
            {"name": k.name, "crafted_multiplier": k.crafted_multiplier}
            if k.crafted_multiplier != 1.0
            else {"name": k.name}
            for k in skeleton.keypoints
        ],
        "edges": [list(skeleton.edge_name(e)) for e in skeleton.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def load_skeleton(path: str | Path) -> Skeleton:
    return parse_skeleton(Path(path).read_text())
