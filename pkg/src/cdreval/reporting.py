"""Exporters: metrics CSV/JSON, pareto JSON, SVG plot files, run manifest.

All outputs are deterministic: sorted keys, fixed row order, no timestamps.
CSV floats use 17 significant digits so binary64 values round-trip; JSON uses
Python's shortest-round-trip repr. Both decode to identical doubles.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from pathlib import Path
from typing import Mapping, Optional, Sequence

from . import __version__
from .core import AxisRegistry, MetricPoint
from .errors import MalformedJsonError, NoCompletePointsError
from .pareto import ParetoResult, pareto_front
from .svgplot import PlotPoint, PlotSpec, render_scatter

CANONICAL_PAIRS: tuple[tuple[str, ...], ...] = (
    ("consistency.dsg", "diversity.cond"),
    ("realism.cond", "diversity.cond"),
    ("consistency.dsg", "realism.cond"),
    ("consistency.dsg", "diversity.cond", "realism.cond"),
)


def fmt_value(value: float) -> str:
    return format(float(value), ".17g")


def sha256_file(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _group_rank(group_id: str) -> tuple[int, str]:
    return (0, "") if group_id == "all" else (1, group_id)


def sort_points(points: Sequence[MetricPoint]) -> list[MetricPoint]:
    return sorted(points, key=lambda p: (_group_rank(p.group_id), p.config_id))


def point_to_json(point: MetricPoint) -> dict:
    return {
        "config_id": point.config_id,
        "group_id": point.group_id,
        "scores": {k: float(v) for k, v in sorted(point.scores.items())},
        "missing": dict(sorted(point.missing.items())),
        "raw": {k: float(v) for k, v in sorted(point.raw.items())},
        "notes": dict(sorted(point.notes.items())),
    }


def point_from_json(obj: dict) -> MetricPoint:
    try:
        return MetricPoint(
            config_id=obj["config_id"],
            group_id=obj["group_id"],
            scores={k: float(v) for k, v in obj["scores"].items()},
            missing=dict(obj.get("missing", {})),
            raw={k: float(v) for k, v in obj.get("raw", {}).items()},
            notes=dict(obj.get("notes", {})),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedJsonError(f"bad metric point: {exc}") from None


def metrics_json_payload(
    points: Sequence[MetricPoint], registry: AxisRegistry, axes: Sequence[str], k: int
) -> dict:
    return {
        "engine": f"cdreval {__version__}",
        "axes": {a: registry.get(a).direction.value for a in axes},
        "k": k,
        "points": [point_to_json(p) for p in sort_points(points)],
    }


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def metrics_csv_payload(points: Sequence[MetricPoint], axes: Sequence[str]) -> str:
    """Long-form CSV: one row per config x group x populated axis."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["config_id", "group_id", "axis", "value"])
    for point in sort_points(points):
        for axis in axes:
            if axis in point.scores:
                writer.writerow([point.config_id, point.group_id, axis, fmt_value(point.scores[axis])])
    return buf.getvalue()


def load_metrics(path: str | Path) -> tuple[dict, list[MetricPoint]]:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"{path}: {exc}") from None
    points = [point_from_json(obj) for obj in payload.get("points", [])]
    return payload, points


def pareto_result_to_json(result: ParetoResult) -> dict:
    def entries(items) -> list[dict]:
        return [
            {"config_id": e.config_id, "scores": {k: float(v) for k, v in sorted(e.scores.items())}}
            for e in items
        ]

    return {
        "front": entries(result.front),
        "dominated": entries(result.dominated),
        "incomplete": list(result.incomplete),
    }


def pareto_json_payload(
    points: Sequence[MetricPoint],
    registry: AxisRegistry,
    pairs: Sequence[Sequence[str]] = CANONICAL_PAIRS,
) -> dict:
    """Fronts per axis set per group. Raises only if nothing is computable."""
    groups: dict[str, list[MetricPoint]] = {}
    for p in points:
        groups.setdefault(p.group_id, []).append(p)

    out_pairs = []
    any_ok = False
    for axes in pairs:
        fronts: dict[str, dict] = {}
        for group_id in sorted(groups, key=_group_rank):
            try:
                result = pareto_front(groups[group_id], axes, registry, group_id=group_id)
            except NoCompletePointsError:
                fronts[group_id] = {"error": "NoCompletePoints"}
                continue
            any_ok = True
            fronts[group_id] = pareto_result_to_json(result)
        out_pairs.append({"axes": list(axes), "fronts": fronts})
    if not any_ok:
        raise NoCompletePointsError("no axis set has a complete point")
    return {"engine": f"cdreval {__version__}", "pairs": out_pairs}


def plot_filename(axes: Sequence[str], group_id: str) -> str:
    return "pareto_" + "__".join([*axes, group_id]) + ".svg"


def write_plots(
    metrics_payload: dict,
    points: Sequence[MetricPoint],
    pareto_payload: dict,
    out_dir: str | Path,
    width: int = 640,
    height: int = 480,
) -> list[Path]:
    """One SVG per 2-axis pair per group that has a computed front."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    directions: Mapping[str, str] = metrics_payload.get("axes", {})
    by_group: dict[str, list[MetricPoint]] = {}
    for p in points:
        by_group.setdefault(p.group_id, []).append(p)

    written: list[Path] = []
    for pair in pareto_payload["pairs"]:
        axes = pair["axes"]
        if len(axes) != 2:
            continue
        axis_x, axis_y = axes
        for group_id, front_obj in pair["fronts"].items():
            if "error" in front_obj:
                continue
            front_ids = [e["config_id"] for e in front_obj["front"]]
            plot_points = [
                PlotPoint(p.config_id, p.scores[axis_x], p.scores[axis_y], p.config_id in front_ids)
                for p in sort_points(by_group.get(group_id, []))
                if axis_x in p.scores and axis_y in p.scores
            ]
            if not plot_points:
                continue
            spec = PlotSpec(
                axis_x=axis_x,
                axis_y=axis_y,
                direction_x=directions.get(axis_x, "max"),
                direction_y=directions.get(axis_y, "max"),
                group_id=group_id,
                width=width,
                height=height,
            )
            svg = render_scatter(plot_points, spec, front_order=front_ids)
            path = out_dir / plot_filename(axes, group_id)
            path.write_text(svg, encoding="utf-8")
            written.append(path)
    return written


def run_manifest(
    inputs: Mapping[str, Optional[str]],
    outputs: Mapping[str, str],
    axes: Sequence[str],
    registry: AxisRegistry,
    k: int,
    out_dir: str | Path,
) -> dict:
    """Reproducibility record: engine version plus content digests of all files."""
    def digest_map(paths: Mapping[str, Optional[str]]) -> dict:
        out = {}
        for name, path in sorted(paths.items()):
            if path is None:
                continue
            out[name] = {"path": str(path), "sha256": sha256_file(path)}
        return out

    return {
        "engine": f"cdreval {__version__}",
        "axes": {a: registry.get(a).direction.value for a in axes},
        "k": k,
        "out_dir": str(out_dir),
        "inputs": digest_map(inputs),
        "outputs": digest_map(outputs),
    }


def verify_manifest(path: str | Path) -> list[str]:
    """Names whose recorded digest no longer matches; empty means reproducible."""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    stale = []
    for section in ("inputs", "outputs"):
        for name, entry in payload.get(section, {}).items():
            if sha256_file(entry["path"]) != entry["sha256"]:
                stale.append(f"{section}.{name}")
    return stale
