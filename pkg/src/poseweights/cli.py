"""Command-line pipeline: ingest annotations, derive weights, compare
schemes, render graphs, and run the loss demo.

Configuration precedence is flags over config-file fields over defaults;
the effective configuration is echoed into every output file's metadata
so results are reproducible.  Identical inputs produce byte-identical
output files.  Every subcommand exits nonzero exactly when it wrote no
output file.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__, data
from .annotations import (
    compute_edge_lengths,
    load_annotations,
    parse_length_stats,
    stats_to_document,
    stats_to_lengths,
)
from .errors import PoseWeightsError
from .graphs import WeightedPoseGraph, attach_lengths
from .loss import (
    DEFAULT_FOCAL_GAMMA,
    LOSS_FORM_NOTE,
    FieldSample,
    bce_focal,
    laplace_loss,
    scale_loss,
    weighted_cif_loss,
)
from .render import emit_dot, emit_svg, load_layout, spring_layout
from .skeleton import Skeleton, load_skeleton
from .weights import DEFAULT_EGO_RADIUS, SCHEMES, WeightTable, build_weight_table, compare_schemes

_DEFAULTS = {
    "scheme": "local",
    "radius": DEFAULT_EGO_RADIUS,
    "mode": "raw",
    "gamma": DEFAULT_FOCAL_GAMMA,
    "b_scale": 1.0,
}


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except (PoseWeightsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except json.JSONDecodeError as exc:
        print(f"error: invalid JSON input: {exc}", file=sys.stderr)
        return 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="poseweights",
        description="Training weights for pose-skeleton keypoints and "
        "connections from ego-graph harmonic centrality.",
    )
    parser.add_argument("--version", action="version", version=f"poseweights {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, lengths_source=True):
        p.add_argument("--config", help="JSON config file; flags override its fields")
        p.add_argument(
            "--skeleton",
            help="skeleton file path, or the name of a shipped fixture "
            "(wholebody, car)",
        )
        if lengths_source:
            p.add_argument("--annotations", help="COCO-style keypoint annotation file")
            p.add_argument("--lengths", help="edge-length statistics file (from ingest)")
            p.add_argument(
                "--mode",
                choices=["raw", "scale-normalized"],
                help="averaging mode for annotation distances (default raw)",
            )
            p.add_argument(
                "--fallback",
                type=float,
                help="length assigned to edges with no annotation coverage",
            )
        p.add_argument("--out", help="output path")

    p_ingest = sub.add_parser("ingest", help="average annotation distances per edge")
    common(p_ingest)
    p_ingest.set_defaults(handler=cmd_ingest)

    p_weights = sub.add_parser("weights", help="write a weight table for one scheme")
    common(p_weights)
    _scheme_flags(p_weights)
    p_weights.set_defaults(handler=cmd_weights)

    p_compare = sub.add_parser("compare", help="weight tables for all four schemes")
    common(p_compare)
    p_compare.add_argument("--radius", type=int, help="ego radius (0 = global)")
    p_compare.set_defaults(handler=cmd_compare)

    p_render = sub.add_parser("render", help="emit DOT and SVG renderings")
    common(p_render)
    _scheme_flags(p_render)
    p_render.add_argument(
        "--layout",
        help="template-pose layout file; omitted = deterministic force-directed fallback",
    )
    p_render.set_defaults(handler=cmd_render)

    p_loss = sub.add_parser(
        "loss-demo", help="evaluate the weighted composite loss on a sample file"
    )
    p_loss.add_argument("--config", help="JSON config file; flags override its fields")
    p_loss.add_argument("--samples", help="synthetic field-sample file")
    p_loss.add_argument("--weights", help="weight-table file (default: all weights 1)")
    p_loss.add_argument("--gamma", type=float, help="focal loss exponent (default 2.0)")
    p_loss.add_argument("--b-scale", type=float, dest="b_scale", help="fixed scale spread")
    p_loss.add_argument("--out", help="output path")
    p_loss.set_defaults(handler=cmd_loss_demo)

    return parser


def _scheme_flags(p):
    p.add_argument("--scheme", choices=list(SCHEMES), help="weighting scheme (default local)")
    p.add_argument("--radius", type=int, help="ego radius for the local scheme (0 = global)")


def _effective(args, keys) -> dict:
    """Merge flag values over config-file fields over defaults."""
    config = {}
    if getattr(args, "config", None):
        config = json.loads(Path(args.config).read_text())
        if not isinstance(config, dict):
            raise PoseWeightsError("config file must hold a JSON object")
    merged = {}
    for key in keys:
        value = getattr(args, key, None)
        if value is None:
            value = config.get(key, _DEFAULTS.get(key))
        merged[key] = value
    return merged


def _require(cfg: dict, *keys: str) -> None:
    for key in keys:
        if cfg.get(key) is None:
            raise PoseWeightsError(f"missing required option --{key.replace('_', '-')}")


def _resolve_skeleton(value: str) -> Skeleton:
    path = Path(value)
    if not path.exists():
        fixture = data.skeleton_path(value, missing_ok=True)
        if fixture is not None:
            return load_skeleton(fixture)
        raise PoseWeightsError(f"skeleton file {value!r} not found")
    return load_skeleton(path)


def _mode_key(mode: str) -> str:
    return mode.replace("-", "_")


def _scheme_and_radius(cfg: dict) -> tuple[str, int | None]:
    """Radius 0 means the whole graph; it turns the local scheme into global."""
    scheme = cfg["scheme"]
    radius = cfg["radius"]
    if radius is not None and radius < 0:
        raise PoseWeightsError(f"--radius must be >= 0, got {radius}")
    if scheme == "local" and radius == 0:
        return "global", None
    return scheme, radius


def _metadata(cfg: dict) -> dict:
    return {"tool": f"poseweights {__version__}", "config": cfg}


def _build_graph(cfg: dict) -> WeightedPoseGraph:
    """Graph from the configured skeleton plus exactly one length source."""
    skeleton = _resolve_skeleton(cfg["skeleton"])
    if (cfg.get("annotations") is None) == (cfg.get("lengths") is None):
        raise PoseWeightsError(
            "exactly one of --annotations and --lengths must be given"
        )
    if cfg.get("annotations") is not None:
        corpus = load_annotations(cfg["annotations"], skeleton)
        stats = compute_edge_lengths(corpus, skeleton, _mode_key(cfg["mode"]))
        lengths = stats_to_lengths(stats, skeleton, cfg.get("fallback"))
    else:
        doc = json.loads(Path(cfg["lengths"]).read_text())
        stats = parse_length_stats(doc, skeleton)
        fallback = cfg.get("fallback")
        if fallback is None:
            fallback = doc.get("metadata", {}).get("fallback")
        lengths = stats_to_lengths(stats, skeleton, fallback)
    return attach_lengths(skeleton, lengths)


def _write(path: str, text: str) -> None:
    out = Path(path)
    if out.parent != Path(""):
        out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)


def _dump(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def cmd_ingest(args) -> int:
    cfg = _effective(args, ["skeleton", "annotations", "mode", "fallback", "out"])
    _require(cfg, "skeleton", "annotations", "out")
    skeleton = _resolve_skeleton(cfg["skeleton"])
    corpus = load_annotations(cfg["annotations"], skeleton)
    stats = compute_edge_lengths(corpus, skeleton, _mode_key(cfg["mode"]))
    uncovered = [skeleton.edge_name(e) for i, e in enumerate(skeleton.edges) if stats.counts[i] == 0]
    if uncovered and cfg["fallback"] is None:
        raise PoseWeightsError(
            f"{len(uncovered)} edge(s) have no annotation coverage, first: "
            f"{uncovered[0]}; pass --fallback to accept them"
        )
    metadata = _metadata(cfg)
    if cfg["fallback"] is not None:
        metadata["fallback"] = cfg["fallback"]
    doc = stats_to_document(stats, skeleton, _mode_key(cfg["mode"]), len(corpus), metadata)
    _write(cfg["out"], _dump(doc))
    print(
        f"covered {stats.num_covered}/{skeleton.num_edges} edges "
        f"from {len(corpus)} instances -> {cfg['out']}"
    )
    return 0


def _table_doc(skeleton: Skeleton, table: WeightTable) -> dict:
    return {
        "skeleton": skeleton.name,
        "scheme": table.scheme,
        "radius": table.radius,
        "keypoints": [
            {"name": kp.name, "weight": float(w)}
            for kp, w in zip(skeleton.keypoints, table.vertex_weights)
        ],
        "connections": [
            {"edge": list(skeleton.edge_name(e)), "weight": float(w)}
            for e, w in zip(skeleton.edges, table.edge_weights)
        ],
        "summary": table.summary(),
    }


def cmd_weights(args) -> int:
    cfg = _effective(
        args,
        ["skeleton", "annotations", "lengths", "mode", "fallback", "scheme", "radius", "out"],
    )
    _require(cfg, "skeleton", "out")
    scheme, radius = _scheme_and_radius(cfg)
    graph = _build_graph(cfg)
    table = build_weight_table(graph, scheme, radius or DEFAULT_EGO_RADIUS)
    doc = {"metadata": _metadata(cfg), **_table_doc(graph.skeleton, table)}
    _write(cfg["out"], _dump(doc))
    print(f"{scheme} weights for {graph.skeleton.name} -> {cfg['out']}")
    return 0


def cmd_compare(args) -> int:
    cfg = _effective(
        args,
        ["skeleton", "annotations", "lengths", "mode", "fallback", "radius", "out"],
    )
    _require(cfg, "skeleton", "out")
    radius = cfg["radius"] or DEFAULT_EGO_RADIUS
    graph = _build_graph(cfg)
    comparison = compare_schemes(graph, radius)
    doc = {
        "metadata": _metadata(cfg),
        "skeleton": graph.skeleton.name,
        "schemes": {
            scheme: _table_doc(graph.skeleton, table)
            for scheme, table in comparison.tables.items()
        },
    }
    _write(cfg["out"], _dump(doc))
    header = f"{'scheme':<10} {'v.min':>8} {'v.max':>8} {'v.ratio':>8} {'e.min':>8} {'e.max':>8} {'e.ratio':>8}"
    print(header)
    for scheme, summary in comparison.summaries().items():
        v, e = summary["vertex"], summary["edge"]
        print(
            f"{scheme:<10} {v['min']:>8.4f} {v['max']:>8.4f} {v['ratio']:>8.3f} "
            f"{e['min']:>8.4f} {e['max']:>8.4f} {e['ratio']:>8.3f}"
        )
    return 0


def cmd_render(args) -> int:
    cfg = _effective(
        args,
        [
            "skeleton",
            "annotations",
            "lengths",
            "mode",
            "fallback",
            "scheme",
            "radius",
            "layout",
            "out",
        ],
    )
    _require(cfg, "skeleton", "out")
    scheme, radius = _scheme_and_radius(cfg)
    graph = _build_graph(cfg)
    table = build_weight_table(graph, scheme, radius or DEFAULT_EGO_RADIUS)
    if cfg["layout"] is not None:
        layout_file = Path(cfg["layout"])
        if not layout_file.exists():
            fixture = data.layout_path(cfg["layout"], missing_ok=True)
            if fixture is None:
                raise PoseWeightsError(f"layout file {cfg['layout']!r} not found")
            layout_file = fixture
        layout = load_layout(layout_file)
    else:
        layout = spring_layout(graph)
    dot = emit_dot(graph, table)
    svg = emit_svg(graph, table, layout)
    base = cfg["out"]
    _write(f"{base}.dot", dot)
    _write(f"{base}.svg", svg)
    print(f"rendered {graph.skeleton.name} ({scheme}) -> {base}.dot, {base}.svg")
    return 0


def _parse_field_sample(raw: dict, where: str) -> FieldSample:
    try:
        return FieldSample(
            c=float(raw["c"]),
            c_hat=float(raw["c_hat"]),
            v=tuple(float(x) for x in raw["v"]),
            v_hat=tuple(float(x) for x in raw["v_hat"]),
            b_hat=float(raw["b_hat"]),
            s=float(raw["s"]),
            s_hat=float(raw["s_hat"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise PoseWeightsError(f"bad field sample in {where}: {exc}") from exc


def cmd_loss_demo(args) -> int:
    cfg = _effective(args, ["samples", "weights", "gamma", "b_scale", "out"])
    _require(cfg, "samples", "out")
    doc = json.loads(Path(cfg["samples"]).read_text())
    gamma, b_s = cfg["gamma"], cfg["b_scale"]

    vertex_weights: dict[str, float] = {}
    edge_weight_map: dict[frozenset, float] = {}
    if cfg["weights"] is not None:
        table_doc = json.loads(Path(cfg["weights"]).read_text())
        vertex_weights = {kp["name"]: kp["weight"] for kp in table_doc["keypoints"]}
        edge_weight_map = {
            frozenset(c["edge"]): c["weight"] for c in table_doc.get("connections", [])
        }

    samples = {
        kind: [_parse_field_sample(s, f"keypoint type {kind!r}") for s in entries]
        for kind, entries in doc.get("keypoint_samples", {}).items()
    }
    weights = {kind: vertex_weights.get(kind, 1.0) for kind in samples}
    cif_total = weighted_cif_loss(samples, weights, gamma=gamma, b_s=b_s)
    per_type = {
        kind: weights[kind]
        * sum(
            bce_focal(s.c, s.c_hat, gamma)
            + laplace_loss(s.v, s.v_hat, s.b_hat)
            + scale_loss(s.s, s.s_hat, b_s)
            for s in entries
        )
        for kind, entries in samples.items()
    }

    # The association-field analogue: two vector and two scale components
    # per sample, weighted by the connection weight.
    caf_total = 0.0
    per_connection = {}
    for entry in doc.get("connection_samples", []):
        pair = tuple(entry["edge"])
        weight = edge_weight_map.get(frozenset(pair), 1.0)
        inner = 0.0
        for s in entry["samples"]:
            inner += bce_focal(float(s["c"]), float(s["c_hat"]), gamma)
            inner += laplace_loss(s["v1"], s["v1_hat"], float(s["b1_hat"]))
            inner += laplace_loss(s["v2"], s["v2_hat"], float(s["b2_hat"]))
            inner += scale_loss(float(s["s1"]), float(s["s1_hat"]), b_s)
            inner += scale_loss(float(s["s2"]), float(s["s2_hat"]), b_s)
        per_connection["--".join(pair)] = weight * inner
        caf_total += weight * inner

    out_doc = {
        "metadata": {**_metadata(cfg), "loss_form": LOSS_FORM_NOTE},
        "gamma": gamma,
        "b_scale": b_s,
        "cif_total": cif_total,
        "caf_total": caf_total,
        "total": cif_total + caf_total,
        "per_keypoint_type": per_type,
        "per_connection": per_connection,
    }
    _write(cfg["out"], _dump(out_doc))
    print(f"total weighted loss {cif_total + caf_total:.6f} -> {cfg['out']}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
