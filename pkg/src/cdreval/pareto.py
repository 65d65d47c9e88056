"""Non-dominated set extraction over registered metric axes.

Dominance is evaluated after direction normalization (minimize axes negated),
so "greater or equal everywhere, strictly greater somewhere" is the single
rule. Exact duplicates are never dominated by each other and therefore stay
on the front together. Points missing a requested axis sit out of dominance
and are reported separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .core import AxisRegistry, Direction, MetricPoint
from .errors import NoCompletePointsError, UnknownAxisError


def normalize_direction(scores: Mapping[str, float], registry: AxisRegistry) -> dict[str, float]:
    """Scores with minimize axes negated, so bigger is uniformly better."""
    out = {}
    for axis, value in scores.items():
        direction = registry.get(axis).direction
        out[axis] = -value if direction is Direction.MINIMIZE else value
    return out


@dataclass(frozen=True)
class FrontEntry:
    config_id: str
    scores: Mapping[str, float]


@dataclass(frozen=True)
class ParetoResult:
    axes: tuple[str, ...]
    group_id: str
    front: tuple[FrontEntry, ...]
    dominated: tuple[FrontEntry, ...]
    incomplete: tuple[str, ...] = ()


def _front_mask(values: np.ndarray) -> np.ndarray:
    """Boolean mask of non-dominated rows of a (n, d) normalized score array."""
    n = values.shape[0]
    mask = np.ones(n, dtype=bool)
    for i in range(n):
        ge_all = np.all(values >= values[i], axis=1)
        gt_any = np.any(values > values[i], axis=1)
        if np.any(ge_all & gt_any):
            mask[i] = False
    return mask


def pareto_front(
    points: Sequence[MetricPoint],
    axes: Sequence[str],
    registry: AxisRegistry,
    group_id: str = "all",
) -> ParetoResult:
    """Split points into front and dominated on the given 2 or 3 axes.

    Output ordering is ascending by the first axis after normalization, then
    by config id.
    """
    axes = tuple(axes)
    if len(axes) < 2 or len(set(axes)) != len(axes):
        raise UnknownAxisError(f"need distinct axes, got {axes}")
    for axis in axes:
        registry.get(axis)

    complete = [p for p in points if p.complete_on(axes)]
    incomplete = tuple(sorted(p.config_id for p in points if not p.complete_on(axes)))
    if not complete:
        raise NoCompletePointsError(f"no points cover axes {axes}")

    normalized = np.asarray(
        [[normalize_direction(dict(p.scores), registry)[a] for a in axes] for p in complete]
    )
    mask = _front_mask(normalized)

    def sort_key(idx: int):
        return (normalized[idx, 0], complete[idx].config_id)

    order = sorted(range(len(complete)), key=sort_key)
    front = tuple(
        FrontEntry(complete[i].config_id, {a: complete[i].scores[a] for a in axes})
        for i in order
        if mask[i]
    )
    dominated = tuple(
        FrontEntry(complete[i].config_id, {a: complete[i].scores[a] for a in axes})
        for i in order
        if not mask[i]
    )
    return ParetoResult(axes=axes, group_id=group_id, front=front, dominated=dominated, incomplete=incomplete)


def fronts_by_group(
    points: Sequence[MetricPoint],
    axes: Sequence[str],
    registry: AxisRegistry,
) -> dict[str, ParetoResult]:
    """One independent front per group id present in the points."""
    groups: dict[str, list[MetricPoint]] = {}
    for p in points:
        groups.setdefault(p.group_id, []).append(p)
    return {
        gid: pareto_front(members, axes, registry, group_id=gid)
        for gid, members in sorted(groups.items())
    }
