"""Command-level operations shared by the CLI and the HTTP service.

Each op takes resolved arguments, does the file work, and returns a plain
dict the callers serialize. Input problems raise CdrError subclasses (exit
code 2 / HTTP 422); genuine I/O faults raise OSError (exit 1 / HTTP 500).
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional, Sequence

from . import core, reporting, store, toyworld
from .core import FILE_PIPELINE_AXES, default_registry
from .errors import MissingVerdictsError, UnknownAxisError
from .knobs import SweepPlan, run_sweep
from .store import table_paths


def _require_file(path: str | Path, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{what} not found: {p}")
    return p


def op_validate(embeddings: str, verdicts: Optional[str] = None) -> dict:
    """Validate a table pair (and optionally a verdicts file against it)."""
    payload_path, sidecar_path = table_paths(embeddings)
    _require_file(payload_path, "embeddings payload")
    _require_file(sidecar_path, "metadata sidecar")
    table = store.read_table(embeddings, validate=False)
    report = core.validate_table(table)
    violations = [
        {"kind": v.kind, "record_id": v.record_id, "detail": v.detail} for v in report.violations
    ]
    result: dict = {"ok": report.ok, "rows": len(table), "violations": violations}
    if verdicts is not None:
        log = store.read_verdicts(_require_file(verdicts, "verdicts file"))
        generated = {m.record_id for m in table.metas if m.role is core.Role.GENERATED}
        unknown = sorted({r for _, r, _, _ in log.entries if r not in generated})
        result["verdicts"] = len(log)
        result["unmatched_verdict_records"] = unknown
        if unknown:
            result["ok"] = False
            result["violations"] = violations + [
                {"kind": "UnknownVerdictRecord", "record_id": r, "detail": ""} for r in unknown
            ]
    return result


def resolve_axes(axes: Optional[Sequence[str]]) -> list[str]:
    registry = default_registry()
    if axes is None or not list(axes):
        return list(FILE_PIPELINE_AXES)
    for axis in axes:
        if axis not in registry:
            raise UnknownAxisError(f"axis {axis!r} not in default registry {registry.names()}")
    return list(axes)


def op_metrics(
    embeddings: str,
    sweep: str,
    out: str,
    verdicts: Optional[str] = None,
    axes: Optional[Sequence[str]] = None,
    k: int = 3,
    group_by: str = "group",
) -> dict:
    """Run the sweep over the table and write metrics.csv/.json plus a manifest."""
    registry = default_registry()
    axis_list = resolve_axes(axes)

    payload_path, sidecar_path = table_paths(embeddings)
    _require_file(payload_path, "embeddings payload")
    _require_file(sidecar_path, "metadata sidecar")
    sweep_path = _require_file(sweep, "sweep file")

    verdict_log = None
    if verdicts is not None:
        verdict_log = store.read_verdicts(_require_file(verdicts, "verdicts file"))
    elif core.AXIS_CONSISTENCY_DSG in axis_list:
        raise MissingVerdictsError(
            f"axis {core.AXIS_CONSISTENCY_DSG} requested but no verdicts file given"
        )

    table = store.read_table(embeddings)
    configs = store.read_sweep(sweep_path)
    plan = SweepPlan(configs=tuple(configs), axes=tuple(axis_list))
    points = run_sweep(plan, table, verdict_log, k=k, include_groups=group_by != "none")

    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload = reporting.metrics_json_payload(points, registry, axis_list, k)
    json_path = out_dir / "metrics.json"
    json_path.write_text(reporting.dump_json(payload), encoding="utf-8")
    csv_path = out_dir / "metrics.csv"
    csv_path.write_text(reporting.metrics_csv_payload(points, axis_list), encoding="utf-8")
    manifest = reporting.run_manifest(
        inputs={
            "embeddings": str(payload_path),
            "sidecar": str(sidecar_path),
            "verdicts": verdicts,
            "sweep": str(sweep_path),
        },
        outputs={"metrics.csv": str(csv_path), "metrics.json": str(json_path)},
        axes=axis_list,
        registry=registry,
        k=k,
        out_dir=out_dir,
    )
    manifest_path = out_dir / "run_manifest.json"
    manifest_path.write_text(reporting.dump_json(manifest), encoding="utf-8")
    return {
        "points": payload["points"],
        "files": {
            "metrics.csv": str(csv_path),
            "metrics.json": str(json_path),
            "run_manifest.json": str(manifest_path),
        },
    }


def parse_pairs(tokens: Optional[Sequence[str]]) -> Optional[list[tuple[str, ...]]]:
    """Parse axis sets like "consistency.dsg:diversity.cond" (2 or 3 axes)."""
    if not tokens:
        return None
    pairs = []
    for token in tokens:
        axes = tuple(t.strip() for t in token.split(":") if t.strip())
        if len(axes) not in (2, 3):
            raise UnknownAxisError(f"axis set {token!r} must name 2 or 3 axes separated by ':'")
        pairs.append(axes)
    return pairs


def op_pareto(metrics: str, out: str, pairs: Optional[Sequence[Sequence[str]]] = None) -> dict:
    """Extract fronts from a metrics.json and write pareto.json."""
    registry = default_registry()
    metrics_path = _require_file(metrics, "metrics file")
    _, points = reporting.load_metrics(metrics_path)
    axis_sets = tuple(tuple(p) for p in pairs) if pairs else reporting.CANONICAL_PAIRS
    payload = reporting.pareto_json_payload(points, registry, axis_sets)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    pareto_path = out_dir / "pareto.json"
    pareto_path.write_text(reporting.dump_json(payload), encoding="utf-8")
    return {"pairs": payload["pairs"], "files": {"pareto.json": str(pareto_path)}}


def op_plot(metrics: str, pareto: str, out: str, width: int = 640, height: int = 480) -> dict:
    """Write one SVG per (pair, group) with the front emphasized."""
    metrics_payload, points = reporting.load_metrics(_require_file(metrics, "metrics file"))
    import json

    pareto_payload = json.loads(_require_file(pareto, "pareto file").read_text(encoding="utf-8"))
    written = reporting.write_plots(metrics_payload, points, pareto_payload, out, width, height)
    return {"files": [str(p) for p in written]}


def op_simulate(
    world: str,
    sweep: str,
    out: str,
    seed: Optional[int] = None,
    n_per_prompt: int = 10,
    n_real_per_prompt: Optional[int] = None,
) -> dict:
    """Sample the toy world under a sweep and write the CDRE dataset trio."""
    world_obj = toyworld.read_world(_require_file(world, "world file"))
    configs = store.read_sweep(_require_file(sweep, "sweep file"))
    effective_seed = world_obj.seed if seed is None else seed
    table, verdicts = toyworld.emit_world_dataset(
        world_obj, configs, n_per_prompt, effective_seed, n_real_per_prompt
    )
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    payload_path, sidecar_path = store.write_table(table, out_dir / "embeddings")
    verdicts_path = store.write_verdicts(verdicts, out_dir / "verdicts.jsonl")
    n_real = sum(1 for m in table.metas if m.role is core.Role.REAL)
    return {
        "rows_real": n_real,
        "rows_generated": len(table) - n_real,
        "verdicts": len(verdicts),
        "seed": effective_seed,
        "files": {
            "embeddings.cdre": str(payload_path),
            "embeddings.meta.jsonl": str(sidecar_path),
            "verdicts.jsonl": str(verdicts_path),
        },
    }
