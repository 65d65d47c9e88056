"""Top-m selection and the sweep runner that turns configs into metric points.

Guidance scale, retrieval neighborhood size and compression bitrate are
labels on pre-generated embedding sets; top-m is the one knob defined purely
on outputs, so the engine can re-execute it when a ranking criterion is
available (prompt embeddings). Without one, a config's top_m_pct is treated
as an upstream label and noted on the point.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence, TypeVar

import numpy as np

from . import core
from .conditional import PromptBundle, aggregate, refilter, score_bundle
from .core import EmbeddingTable, KnobConfig, MetricPoint, Role, VerdictLog
from .errors import CdrError, CriterionUnavailableError, MetricInputError, UnresolvedBindingError
from .kernels import cosine_matrix
from .marginal import MarginalInput, coverage, density, precision, recall, vendi

T = TypeVar("T")
U = TypeVar("U")

ALL_GROUP = "all"


def worker_count() -> int:
    raw = os.environ.get("CDR_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _map_ordered(fn: Callable[[T], U], items: Sequence[T]) -> list[U]:
    """Map with optional thread fan-out; results always in input order."""
    workers = worker_count()
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class PromptCosine:
    """Rank candidates by cosine between the prompt embedding and each sample."""

    def scores(self, bundle: PromptBundle) -> dict[str, float]:
        if bundle.prompt_embedding is None:
            raise CriterionUnavailableError(f"{bundle.prompt_id}: no prompt embedding")
        assert bundle.candidates is not None
        vectors = np.asarray([v for _, v in bundle.candidates], dtype=np.float64)
        sims = cosine_matrix(bundle.prompt_embedding[None, :], vectors)[0]
        return {record_id: float(s) for (record_id, _), s in zip(bundle.candidates, sims)}


@dataclass(frozen=True)
class ScoreField:
    """Rank candidates by a precomputed per-record score field."""

    name: str
    values: Mapping[str, float]

    def scores(self, bundle: PromptBundle) -> dict[str, float]:
        assert bundle.candidates is not None
        out = {}
        for record_id, _ in bundle.candidates:
            if record_id not in self.values:
                raise CriterionUnavailableError(f"{self.name} missing for record {record_id}")
            out[record_id] = float(self.values[record_id])
        return out


FilterCriterion = PromptCosine | ScoreField


def top_m_filter(bundle: PromptBundle, m_pct: float, criterion: FilterCriterion) -> PromptBundle:
    """Keep the ceil(N * m_pct / 100) best-ranked candidates.

    Selection always restarts from the bundle's candidate roster, so the
    operation is idempotent for a fixed percentage and kept sets are nested
    as the percentage grows. Ties keep the lexicographically smaller record.
    """
    if not 0 < m_pct <= 100:
        raise ValueError(f"m_pct must be in (0, 100], got {m_pct}")
    assert bundle.candidates is not None
    roster = bundle.candidates
    scores = criterion.scores(bundle)
    keep = math.ceil(len(roster) * m_pct / 100.0)
    ranked = sorted(roster, key=lambda rv: (-scores[rv[0]], rv[0]))
    kept_ids = {record_id for record_id, _ in ranked[:keep]}
    kept = [rv for rv in roster if rv[0] in kept_ids]
    return refilter(bundle, kept)


@dataclass(frozen=True)
class SweepPlan:
    """What to compute: configs, axes, and optional per-prompt embeddings.

    Prompt embeddings enable the clip-consistency axis and make top-m
    re-executable with the prompt-cosine criterion.
    """

    configs: tuple[KnobConfig, ...]
    axes: tuple[str, ...]
    prompt_embeddings: Mapping[str, np.ndarray] = field(default_factory=dict)
    apply_top_m: bool = True


_CONDITIONAL_AXES = {
    core.AXIS_CONSISTENCY_DSG: "consistency",
    core.AXIS_CONSISTENCY_CLIP: "clip_consistency",
    core.AXIS_DIVERSITY_COND: "diversity_score",
    core.AXIS_REALISM_COND: "realism",
}

_MARGINAL_AXES = {
    core.AXIS_REALISM_PRECISION: precision,
    core.AXIS_DIVERSITY_RECALL: recall,
    core.AXIS_REALISM_DENSITY: density,
    core.AXIS_DIVERSITY_COVERAGE: coverage,
}


def _rows_in_scope(table: EmbeddingTable, group_id: Optional[str]):
    gen: dict[str, dict[str, list[tuple[str, np.ndarray]]]] = {}
    real: dict[str, list[tuple[str, np.ndarray]]] = {}
    for meta, vec in table:
        if group_id is not None and meta.group_id != group_id:
            continue
        if meta.role is Role.GENERATED:
            gen.setdefault(meta.config_id or "", {}).setdefault(meta.prompt_id, []).append(
                (meta.record_id, vec)
            )
        else:
            real.setdefault(meta.prompt_id, []).append((meta.record_id, vec))
    return gen, real


def _config_point(
    config: KnobConfig,
    group_id: str,
    gen_by_prompt: dict[str, list[tuple[str, np.ndarray]]],
    real_by_prompt: dict[str, list[tuple[str, np.ndarray]]],
    plan: SweepPlan,
    verdicts_by_record: Mapping[str, list[bool]],
    k: int,
) -> MetricPoint:
    scores: dict[str, float] = {}
    missing: dict[str, str] = {}
    raw: dict[str, float] = {}
    notes: dict[str, str] = {}

    cond_axes = [a for a in plan.axes if a in _CONDITIONAL_AXES]
    marg_axes = [a for a in plan.axes if a in _MARGINAL_AXES]
    want_vendi = core.AXIS_DIVERSITY_VENDI in plan.axes

    if not gen_by_prompt:
        for axis in plan.axes:
            missing[axis] = "no generated rows in scope"
        return MetricPoint(config.config_id, group_id, scores, missing, raw, notes)

    bundles: list[PromptBundle] = []
    for prompt_id in sorted(gen_by_prompt):
        generated = sorted(gen_by_prompt[prompt_id], key=lambda rv: rv[0])
        real = sorted(real_by_prompt.get(prompt_id, []), key=lambda rv: rv[0])
        verdict_slice = {
            record_id: tuple(verdicts_by_record[record_id])
            for record_id, _ in generated
            if record_id in verdicts_by_record
        }
        embedding = plan.prompt_embeddings.get(prompt_id)
        bundle = PromptBundle(
            prompt_id=prompt_id,
            generated=tuple((r, np.asarray(v, dtype=np.float64)) for r, v in generated),
            real=tuple((r, np.asarray(v, dtype=np.float64)) for r, v in real),
            prompt_embedding=None if embedding is None else np.asarray(embedding, dtype=np.float64),
            verdicts=verdict_slice,
        )
        if plan.apply_top_m and config.top_m_pct is not None:
            if bundle.prompt_embedding is not None:
                bundle = top_m_filter(bundle, config.top_m_pct, PromptCosine())
            else:
                notes["top_m"] = "label only (no ranking criterion available)"
        bundles.append(bundle)

    if cond_axes:
        fields = set()
        for axis in cond_axes:
            fields.add(_CONDITIONAL_AXES[axis])
            if axis == core.AXIS_DIVERSITY_COND:
                fields.add("diversity_raw")
        try:
            per_prompt = [score_bundle(b, fields=tuple(fields)) for b in bundles]
        except MetricInputError as exc:
            raise type(exc)(f"config {config.config_id}: {exc}") from exc
        agg = aggregate(per_prompt)
        for axis in cond_axes:
            field_name = _CONDITIONAL_AXES[axis]
            if field_name in agg.means:
                scores[axis] = agg.means[field_name]
                present, total = agg.coverage[field_name]
                if present != total:
                    notes[f"coverage.{axis}"] = f"{present}/{total}"
            else:
                missing[axis] = f"field {field_name} unavailable for every prompt"
        if core.AXIS_DIVERSITY_COND in scores and "diversity_raw" in agg.means:
            raw[core.AXIS_DIVERSITY_COND + ".raw"] = agg.means["diversity_raw"]

    pooled_generated = [rv for b in bundles for rv in b.generated]
    pooled_generated.sort(key=lambda rv: rv[0])
    gen_matrix = np.asarray([v for _, v in pooled_generated], dtype=np.float64)

    if marg_axes:
        pooled_real = sorted(
            (rv for rows in real_by_prompt.values() for rv in rows), key=lambda rv: rv[0]
        )
        if not pooled_real:
            for axis in marg_axes:
                missing[axis] = "no real rows in scope"
        else:
            real_matrix = np.asarray([v for _, v in pooled_real], dtype=np.float64)
            inp = MarginalInput(real=real_matrix, generated=gen_matrix, k=k)
            for axis in marg_axes:
                try:
                    scores[axis] = _MARGINAL_AXES[axis](inp)
                except MetricInputError as exc:
                    missing[axis] = str(exc)

    if want_vendi:
        try:
            scores[core.AXIS_DIVERSITY_VENDI] = vendi(gen_matrix)
        except MetricInputError as exc:
            missing[core.AXIS_DIVERSITY_VENDI] = str(exc)

    for axis in plan.axes:
        if axis not in scores and axis not in missing:
            missing[axis] = "axis not computable from sweep inputs"
    return MetricPoint(config.config_id, group_id, scores, missing, raw, notes)


def run_sweep(
    plan: SweepPlan,
    table: EmbeddingTable,
    verdicts: Optional[VerdictLog] = None,
    k: int = 3,
    include_groups: bool = True,
) -> list[MetricPoint]:
    """One MetricPoint per (config, group), groups being "all" plus each declared one.

    Configs with no generated rows anywhere in the table are a binding error.
    Metric errors propagate annotated with the config id; structurally
    unavailable axes are flagged on the point instead.
    """
    configs = sorted(plan.configs, key=lambda c: c.config_id)
    present_configs = {m.config_id for m in table.metas if m.role is Role.GENERATED}
    for config in configs:
        if config.config_id not in present_configs:
            raise UnresolvedBindingError(f"no generated rows for config {config.config_id!r}")

    scopes: list[tuple[str, Optional[str]]] = [(ALL_GROUP, None)]
    if include_groups:
        declared_groups = sorted({m.group_id for m in table.metas if m.group_id is not None})
        scopes += [(g, g) for g in declared_groups]

    verdicts_by_record = verdicts.by_record() if verdicts is not None else {}

    points: list[MetricPoint] = []
    for group_label, group_filter in scopes:
        gen, real = _rows_in_scope(table, group_filter)
        jobs = [
            (config, group_label, gen.get(config.config_id, {}), real)
            for config in configs
        ]
        points.extend(
            _map_ordered(
                lambda job: _config_point(job[0], job[1], job[2], job[3], plan, verdicts_by_record, k),
                jobs,
            )
        )
    return points
