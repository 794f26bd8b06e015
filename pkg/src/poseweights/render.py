"""Graph renderings with weight-proportional styling.

Two output forms: Graphviz DOT text (topology with weight labels) and a
standalone SVG drawn on template-pose coordinates, where marker radius
grows with keypoint weight and colors follow a fixed viridis-like ramp.
Both emitters are pure functions of their inputs and produce byte-stable
output.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import RenderError
from .graphs import WeightedPoseGraph
from .weights import WeightTable

__all__ = [
    "emit_dot",
    "emit_svg",
    "parse_layout",
    "load_layout",
    "spring_layout",
]

# Five-anchor approximation of the viridis ramp, interpolated linearly.
_RAMP = ("#440154", "#3b528b", "#21918c", "#5ec962", "#fde725")
_RAMP_NAME = "viridis-5"

_MIN_RADIUS, _MAX_RADIUS = 4.0, 14.0
_MIN_STROKE, _MAX_STROKE = 1.0, 4.5


def _hex_to_rgb(code: str) -> tuple[int, int, int]:
    return tuple(int(code[i : i + 2], 16) for i in (1, 3, 5))


def _ramp_color(t: float) -> str:
    """Color at t in [0, 1] along the ramp."""
    t = min(max(t, 0.0), 1.0)
    span = len(_RAMP) - 1
    left = min(int(t * span), span - 1)
    frac = t * span - left
    lo, hi = _hex_to_rgb(_RAMP[left]), _hex_to_rgb(_RAMP[left + 1])
    rgb = tuple(round(a + (b - a) * frac) for a, b in zip(lo, hi))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def _normalizer(values: np.ndarray):
    lo, hi = float(np.min(values)), float(np.max(values))
    if hi > lo:
        return lo, hi, lambda w: (w - lo) / (hi - lo)
    return lo, hi, lambda w: 0.5


def _check_table(graph: WeightedPoseGraph, table: WeightTable) -> None:
    if len(table.vertex_weights) != graph.num_vertices or len(
        table.edge_weights
    ) != graph.num_edges:
        raise RenderError(
            f"weight table ({len(table.vertex_weights)} keypoints, "
            f"{len(table.edge_weights)} connections) does not match graph "
            f"({graph.num_vertices}, {graph.num_edges})"
        )


def emit_dot(graph: WeightedPoseGraph, table: WeightTable) -> str:
    """Graphviz DOT text with weight labels and ramp colors on nodes and edges."""
    _check_table(graph, table)
    skeleton = graph.skeleton
    _, _, vnorm = _normalizer(table.vertex_weights)
    _, _, enorm = _normalizer(table.edge_weights)
    lines = [
        f'graph "{skeleton.name}" {{',
        f"  // scheme={table.scheme} ramp={_RAMP_NAME}",
        "  node [shape=circle, style=filled];",
    ]
    for kp, w in zip(skeleton.keypoints, table.vertex_weights):
        color = _ramp_color(vnorm(w))
        lines.append(
            f'  {kp.index} [label="{kp.name}\\n{w:.3f}", fillcolor="{color}"];'
        )
    for edge, w in zip(skeleton.edges, table.edge_weights):
        color = _ramp_color(enorm(w))
        width = _MIN_STROKE + (_MAX_STROKE - _MIN_STROKE) * enorm(w)
        lines.append(
            f'  {edge.a} -- {edge.b} [label="{w:.3f}", color="{color}", '
            f"penwidth={width:.2f}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_svg(
    graph: WeightedPoseGraph,
    table: WeightTable,
    layout: dict[str, tuple[float, float]],
) -> str:
    """Standalone SVG: markers sized and colored by keypoint weight,
    connections colored by connection weight, plus a min/max legend."""
    _check_table(graph, table)
    skeleton = graph.skeleton
    for kp in skeleton.keypoints:
        if kp.name not in layout:
            raise RenderError(f"layout provides no position for keypoint {kp.name!r}")

    points = np.array([layout[k.name] for k in skeleton.keypoints], dtype=np.float64)
    span = points.max(axis=0) - points.min(axis=0)
    scale = 560.0 / max(float(span.max()), 1e-9)
    margin = 40.0
    xy = (points - points.min(axis=0)) * scale + margin
    width = float(xy[:, 0].max()) + margin
    height = float(xy[:, 1].max()) + margin + 60.0  # room for the legend

    vlo, vhi, vnorm = _normalizer(table.vertex_weights)
    elo, ehi, enorm = _normalizer(table.edge_weights)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width:.0f}" '
        f'height="{height:.0f}" viewBox="0 0 {width:.0f} {height:.0f}">',
        f"<!-- skeleton={skeleton.name} scheme={table.scheme} ramp={_RAMP_NAME} -->",
        f'<rect width="100%" height="100%" fill="white"/>',
    ]
    for edge, w in zip(skeleton.edges, table.edge_weights):
        (x1, y1), (x2, y2) = xy[edge.a], xy[edge.b]
        stroke = _MIN_STROKE + (_MAX_STROKE - _MIN_STROKE) * enorm(w)
        out.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="{_ramp_color(enorm(w))}" stroke-width="{stroke:.2f}">'
            f"<title>{skeleton.keypoints[edge.a].name}-"
            f"{skeleton.keypoints[edge.b].name}: {w:.3f}</title></line>"
        )
    for kp, w in zip(skeleton.keypoints, table.vertex_weights):
        x, y = xy[kp.index]
        radius = _MIN_RADIUS + (_MAX_RADIUS - _MIN_RADIUS) * vnorm(w)
        out.append(
            f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius:.2f}" '
            f'fill="{_ramp_color(vnorm(w))}" stroke="black" stroke-width="0.5">'
            f"<title>{kp.name}: {w:.3f}</title></circle>"
        )
    legend_y = height - 44.0
    out.append(
        f'<text x="{margin:.0f}" y="{legend_y:.2f}" font-size="12" '
        f'font-family="sans-serif">keypoints {vlo:.3f}</text>'
    )
    for i in range(5):
        out.append(
            f'<rect x="{margin + 120 + i * 22:.2f}" y="{legend_y - 10:.2f}" '
            f'width="22" height="12" fill="{_ramp_color(i / 4)}"/>'
        )
    out.append(
        f'<text x="{margin + 120 + 5 * 22 + 6:.2f}" y="{legend_y:.2f}" '
        f'font-size="12" font-family="sans-serif">{vhi:.3f}</text>'
    )
    legend_y += 20.0
    out.append(
        f'<text x="{margin:.0f}" y="{legend_y:.2f}" font-size="12" '
        f'font-family="sans-serif">connections {elo:.3f}</text>'
    )
    for i in range(5):
        out.append(
            f'<rect x="{margin + 120 + i * 22:.2f}" y="{legend_y - 10:.2f}" '
            f'width="22" height="12" fill="{_ramp_color(i / 4)}"/>'
        )
    out.append(
        f'<text x="{margin + 120 + 5 * 22 + 6:.2f}" y="{legend_y:.2f}" '
        f'font-size="12" font-family="sans-serif">{ehi:.3f}</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_layout(document: str | bytes | dict) -> dict[str, tuple[float, float]]:
    """Template-pose layout: {"positions": {keypoint name: [x, y], ...}}."""
    if isinstance(document, (str, bytes)):
        try:
            document = json.loads(document)
        except json.JSONDecodeError as exc:
            raise RenderError(f"layout document is not valid JSON: {exc}") from exc
    if not isinstance(document, dict) or "positions" not in document:
        raise RenderError("layout document must carry a 'positions' object")
    positions = {}
    for name, pair in document["positions"].items():
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise RenderError(f"layout position for {name!r} must be an [x, y] pair")
        positions[name] = (float(pair[0]), float(pair[1]))
    return positions


def load_layout(path: str | Path) -> dict[str, tuple[float, float]]:
    return parse_layout(Path(path).read_text())


def spring_layout(
    graph: WeightedPoseGraph, seed: int = 0, iterations: int = 120
) -> dict[str, tuple[float, float]]:
    """Deterministic force-directed fallback layout for arbitrary skeletons."""
    n = graph.num_vertices
    rng = np.random.RandomState(seed)
    pos = rng.uniform(0.0, 1.0, size=(n, 2))
    if n == 1:
        return {graph.skeleton.keypoints[0].name: (0.0, 0.0)}
    k = 1.0 / np.sqrt(n)
    ea = np.array([e.a for e in graph.skeleton.edges], dtype=np.int64)
    eb = np.array([e.b for e in graph.skeleton.edges], dtype=np.int64)
    temperature = 0.1
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=2)
        np.fill_diagonal(dist, 1.0)
        repulse = (k * k / dist**2)[:, :, None] * delta
        force = repulse.sum(axis=1)
        if len(ea):
            span = pos[ea] - pos[eb]
            d = np.linalg.norm(span, axis=1, keepdims=True)
            d[d == 0] = 1e-9
            pull = span / d * (d / k)
            np.add.at(force, ea, -pull)
            np.add.at(force, eb, pull)
        norms = np.linalg.norm(force, axis=1, keepdims=True)
        norms[norms == 0] = 1.0
        pos += force / norms * min(temperature, 0.1)
        temperature *= 0.97
    return {
        kp.name: (float(pos[kp.index, 0]), float(pos[kp.index, 1]))
        for kp in graph.skeleton.keypoints
    }
