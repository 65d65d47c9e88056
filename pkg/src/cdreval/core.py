"""Shared domain types: embedding tables, verdict logs, knob configs, metric axes.

Everything here is immutable after construction and safe to share across
workers. Record ids double as the universal deterministic tie-break, so all
reductions downstream iterate in ascending record-id order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, Optional, Sequence

import numpy as np

from .errors import DuplicateAxisError, UnknownAxisError, UnknownDirectionError


class Role(Enum):
    REAL = "real"
    GENERATED = "generated"


@dataclass(frozen=True)
class EmbeddingRowMeta:
    """Per-row metadata: ids, group, role and (for generated rows) the config."""

    record_id: str
    prompt_id: str
    role: Role
    group_id: Optional[str] = None
    config_id: Optional[str] = None


@dataclass(frozen=True)
class Violation:
    kind: str
    record_id: Optional[str] = None
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def kinds(self) -> list[str]:
        return [v.kind for v in self.violations]


class EmbeddingTable:
    """Per-row feature vectors plus aligned metadata.

    Vectors are stored as float32 (the on-disk precision); all metric math
    promotes to float64. Rows of the wrong length are representable so that
    validate_table can report them; matrix() refuses to assemble such tables.
    Row arrays are frozen after construction.
    """

    def __init__(self, dim: int, metas: Sequence[EmbeddingRowMeta], vectors):
        if dim < 1:
            raise ValueError(f"dim must be >= 1, got {dim}")
        rows = []
        for v in vectors:
            row = np.asarray(v, dtype=np.float32).ravel()
            row.flags.writeable = False
            rows.append(row)
        if len(rows) != len(metas):
            raise ValueError(f"{len(metas)} metas vs {len(rows)} vectors")
        self.dim = dim
        self.metas: tuple[EmbeddingRowMeta, ...] = tuple(metas)
        self.vectors: tuple[np.ndarray, ...] = tuple(rows)

    def __len__(self) -> int:
        return len(self.metas)

    def __iter__(self) -> Iterator[tuple[EmbeddingRowMeta, np.ndarray]]:
        return zip(self.metas, self.vectors)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EmbeddingTable):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.metas == other.metas
            and len(self.vectors) == len(other.vectors)
            and all(a.tobytes() == b.tobytes() for a, b in zip(self.vectors, other.vectors))
        )

    def matrix(self) -> np.ndarray:
        """(n, dim) float32 array; raises if any row has the wrong length."""
        bad = [i for i, v in enumerate(self.vectors) if len(v) != self.dim]
        if bad:
            raise ValueError(f"rows {bad[:5]} have length != dim={self.dim}")
        if not self.vectors:
            return np.zeros((0, self.dim), dtype=np.float32)
        return np.stack(self.vectors)

    def record_ids(self) -> list[str]:
        return [m.record_id for m in self.metas]


def validate_table(table: EmbeddingTable) -> ValidationReport:
    """Check table invariants; violations are data, not faults.

    Reported kinds: DimMismatch, DuplicateRecordId, ZeroVector,
    MissingConfig (generated row without config), RealRowConfig
    (real row carrying one), EmptyId.
    """
    violations: list[Violation] = []
    seen: set[str] = set()
    for meta, vec in table:
        if len(vec) != table.dim:
            violations.append(Violation("DimMismatch", meta.record_id))
        if not meta.record_id or not meta.prompt_id:
            violations.append(Violation("EmptyId", meta.record_id))
        if meta.record_id in seen:
            violations.append(Violation("DuplicateRecordId", meta.record_id))
        seen.add(meta.record_id)
        if not np.any(vec):
            violations.append(Violation("ZeroVector", meta.record_id))
        if meta.role is Role.GENERATED and meta.config_id is None:
            violations.append(Violation("MissingConfig", meta.record_id))
        if meta.role is Role.REAL and meta.config_id is not None:
            violations.append(Violation("RealRowConfig", meta.record_id))
    return ValidationReport(tuple(violations))


@dataclass(frozen=True)
class VerdictLog:
    """Boolean VQA outcomes, one per (prompt, image record, question) triple."""

    entries: tuple[tuple[str, str, str, bool], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def by_record(self) -> dict[str, list[bool]]:
        """Group verdicts per image record, question order preserved."""
        out: dict[str, list[bool]] = {}
        for _prompt, record, _question, verdict in self.entries:
            out.setdefault(record, []).append(verdict)
        return out


@dataclass(frozen=True)
class KnobConfig:
    """One model-knob-value combination: the unit placed on the Pareto plane."""

    config_id: str
    model_name: str
    g_scale: Optional[float] = None
    top_m_pct: Optional[float] = None
    k_neighbors: Optional[int] = None
    bpp: Optional[float] = None

    def __post_init__(self) -> None:
        if not self.config_id:
            raise ValueError("config_id must be non-empty")
        if not self.model_name:
            raise ValueError("model_name must be non-empty")
        if self.g_scale is not None and not self.g_scale > 0:
            raise ValueError(f"{self.config_id}: g_scale must be > 0")
        if self.top_m_pct is not None and not (0 < self.top_m_pct <= 100):
            raise ValueError(f"{self.config_id}: top_m_pct must be in (0, 100]")
        if self.k_neighbors is not None and self.k_neighbors < 1:
            raise ValueError(f"{self.config_id}: k_neighbors must be >= 1")
        if self.bpp is not None and not self.bpp > 0:
            raise ValueError(f"{self.config_id}: bpp must be > 0")


class Direction(Enum):
    MAXIMIZE = "max"
    MINIMIZE = "min"


def parse_direction(token: str) -> Direction:
    t = token.strip().lower()
    if t in ("max", "maximize", "maximise", "up"):
        return Direction.MAXIMIZE
    if t in ("min", "minimize", "minimise", "down"):
        return Direction.MINIMIZE
    raise UnknownDirectionError(f"unknown direction token {token!r}")


@dataclass(frozen=True)
class MetricAxis:
    name: str
    direction: Direction


class AxisRegistry:
    """Immutable name -> axis map; objective orientation lives here as data."""

    def __init__(self, axes: Sequence[MetricAxis]):
        by_name: dict[str, MetricAxis] = {}
        for axis in axes:
            if axis.name in by_name:
                raise DuplicateAxisError(f"duplicate axis name {axis.name!r}")
            if not isinstance(axis.direction, Direction):
                raise UnknownDirectionError(f"{axis.name}: bad direction {axis.direction!r}")
            by_name[axis.name] = axis
        self._by_name = by_name

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def __len__(self) -> int:
        return len(self._by_name)

    def names(self) -> list[str]:
        return list(self._by_name)

    def get(self, name: str) -> MetricAxis:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownAxisError(f"axis {name!r} not registered") from None


def register_axes(defs: Sequence[MetricAxis | tuple[str, str | Direction]]) -> AxisRegistry:
    """Build a registry from MetricAxis objects or (name, direction) pairs."""
    axes = []
    for item in defs:
        if isinstance(item, MetricAxis):
            axes.append(item)
        else:
            name, direction = item
            if not isinstance(direction, Direction):
                direction = parse_direction(direction)
            axes.append(MetricAxis(name, direction))
    return AxisRegistry(axes)


# Canonical axis names. Consistency has a VQA-verdict flavor and a prompt-cosine
# flavor; diversity has within-prompt, manifold-recall, kernel-entropy and
# anchor-coverage flavors; realism has within-prompt, manifold-precision and
# ball-count-density flavors. All are published so that larger is better
# (within-prompt diversity is 1 - mean pairwise similarity).
AXIS_CONSISTENCY_DSG = "consistency.dsg"
AXIS_CONSISTENCY_CLIP = "consistency.clip"
AXIS_DIVERSITY_COND = "diversity.cond"
AXIS_DIVERSITY_RECALL = "diversity.recall"
AXIS_DIVERSITY_VENDI = "diversity.vendi"
AXIS_DIVERSITY_COVERAGE = "diversity.coverage"
AXIS_REALISM_COND = "realism.cond"
AXIS_REALISM_PRECISION = "realism.precision"
AXIS_REALISM_DENSITY = "realism.density"

DEFAULT_AXES = (
    AXIS_CONSISTENCY_DSG,
    AXIS_CONSISTENCY_CLIP,
    AXIS_DIVERSITY_COND,
    AXIS_DIVERSITY_RECALL,
    AXIS_DIVERSITY_VENDI,
    AXIS_DIVERSITY_COVERAGE,
    AXIS_REALISM_COND,
    AXIS_REALISM_PRECISION,
    AXIS_REALISM_DENSITY,
)

# Axes computable from the on-disk inputs alone (embeddings + verdicts).
# consistency.clip additionally needs prompt embeddings, which the file
# pipeline does not carry.
FILE_PIPELINE_AXES = tuple(a for a in DEFAULT_AXES if a != AXIS_CONSISTENCY_CLIP)


def default_registry() -> AxisRegistry:
    return register_axes([(name, Direction.MAXIMIZE) for name in DEFAULT_AXES])


@dataclass(frozen=True)
class MetricPoint:
    """Scores of one config (within one group) on every computed axis.

    Axes that could not be computed are listed in `missing` with a reason;
    such points take part in Pareto analysis only on pairs they fully cover.
    """

    config_id: str
    group_id: str
    scores: Mapping[str, float]
    missing: Mapping[str, str] = field(default_factory=dict)
    raw: Mapping[str, float] = field(default_factory=dict)
    notes: Mapping[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for axis, value in self.scores.items():
            if not math.isfinite(value):
                raise ValueError(f"{self.config_id}/{axis}: non-finite score {value!r}")

    def complete_on(self, axes: Sequence[str]) -> bool:
        return all(a in self.scores for a in axes)
