"""Deterministic SVG scatter plots: text output only, byte-stable per input.

Every config is a circle; front members are emphasized, joined by a single
polyline in front order, and labeled with their config id. Axis labels carry
the objective direction. No timestamps, no randomness, fixed attribute
order, fixed 2-decimal pixel coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

MARGIN_LEFT = 62.0
MARGIN_RIGHT = 18.0
MARGIN_TOP = 30.0
MARGIN_BOTTOM = 46.0

POINT_FILL = "#5b7db1"
FRONT_FILL = "#c8453c"
FRAME_COLOR = "#333333"
GRID_TEXT = "#444444"


@dataclass(frozen=True)
class PlotPoint:
    config_id: str
    x: float
    y: float
    front: bool


@dataclass(frozen=True)
class PlotSpec:
    axis_x: str
    axis_y: str
    direction_x: str = "max"
    direction_y: str = "max"
    group_id: str = "all"
    width: int = 640
    height: int = 480

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("plot dimensions must be positive")


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _fmt_tick(value: float) -> str:
    return f"{value:.4g}"


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;").replace('"', "&quot;")
    )


def _span(values: Sequence[float]) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        pad = abs(lo) * 0.05 or 1.0
    else:
        pad = (hi - lo) * 0.05
    return lo - pad, hi + pad


def render_scatter(points: Sequence[PlotPoint], spec: PlotSpec, front_order: Optional[Sequence[str]] = None) -> str:
    """Render one bi-objective scatter. `front_order` fixes the polyline order."""
    if not points:
        raise ValueError("nothing to plot")
    x_lo, x_hi = _span([p.x for p in points])
    y_lo, y_hi = _span([p.y for p in points])
    plot_w = spec.width - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = spec.height - MARGIN_TOP - MARGIN_BOTTOM

    def px(x: float) -> float:
        return MARGIN_LEFT + (x - x_lo) / (x_hi - x_lo) * plot_w

    def py(y: float) -> float:
        return MARGIN_TOP + plot_h - (y - y_lo) / (y_hi - y_lo) * plot_h

    by_id = {p.config_id: p for p in points}
    if front_order is None:
        front_order = [p.config_id for p in points if p.front]
    front_points = [by_id[cid] for cid in front_order if cid in by_id]

    lines: list[str] = []
    lines.append('<?xml version="1.0" encoding="UTF-8"?>')
    lines.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{spec.width}" '
        f'height="{spec.height}" viewBox="0 0 {spec.width} {spec.height}">'
    )
    lines.append(f'<rect x="0" y="0" width="{spec.width}" height="{spec.height}" fill="#ffffff"/>')
    lines.append(
        f'<rect x="{_fmt(MARGIN_LEFT)}" y="{_fmt(MARGIN_TOP)}" width="{_fmt(plot_w)}" '
        f'height="{_fmt(plot_h)}" fill="none" stroke="{FRAME_COLOR}" stroke-width="1"/>'
    )
    title = f"{spec.axis_x} vs {spec.axis_y} [{spec.group_id}]"
    lines.append(
        f'<text x="{_fmt(spec.width / 2)}" y="18" font-family="monospace" font-size="13" '
        f'fill="{GRID_TEXT}" text-anchor="middle">{_esc(title)}</text>'
    )
    label_x = f"{spec.axis_x} ({spec.direction_x})"
    lines.append(
        f'<text x="{_fmt(MARGIN_LEFT + plot_w / 2)}" y="{_fmt(spec.height - 10)}" '
        f'font-family="monospace" font-size="12" fill="{GRID_TEXT}" text-anchor="middle">{_esc(label_x)}</text>'
    )
    label_y = f"{spec.axis_y} ({spec.direction_y})"
    y_mid = MARGIN_TOP + plot_h / 2
    lines.append(
        f'<text x="14" y="{_fmt(y_mid)}" font-family="monospace" font-size="12" fill="{GRID_TEXT}" '
        f'text-anchor="middle" transform="rotate(-90 14 {_fmt(y_mid)})">{_esc(label_y)}</text>'
    )
    # Corner ticks: data extrema, enough to read the scale without a grid.
    lines.append(
        f'<text x="{_fmt(MARGIN_LEFT)}" y="{_fmt(spec.height - 28)}" font-family="monospace" '
        f'font-size="10" fill="{GRID_TEXT}" text-anchor="middle">{_fmt_tick(x_lo)}</text>'
    )
    lines.append(
        f'<text x="{_fmt(MARGIN_LEFT + plot_w)}" y="{_fmt(spec.height - 28)}" font-family="monospace" '
        f'font-size="10" fill="{GRID_TEXT}" text-anchor="middle">{_fmt_tick(x_hi)}</text>'
    )
    lines.append(
        f'<text x="{_fmt(MARGIN_LEFT - 6)}" y="{_fmt(MARGIN_TOP + plot_h)}" font-family="monospace" '
        f'font-size="10" fill="{GRID_TEXT}" text-anchor="end">{_fmt_tick(y_lo)}</text>'
    )
    lines.append(
        f'<text x="{_fmt(MARGIN_LEFT - 6)}" y="{_fmt(MARGIN_TOP + 8)}" font-family="monospace" '
        f'font-size="10" fill="{GRID_TEXT}" text-anchor="end">{_fmt_tick(y_hi)}</text>'
    )

    if front_points:
        coords = " ".join(f"{_fmt(px(p.x))},{_fmt(py(p.y))}" for p in front_points)
        lines.append(
            f'<polyline points="{coords}" fill="none" stroke="{FRONT_FILL}" '
            f'stroke-width="1.5" stroke-dasharray="4 3"/>'
        )
    for p in points:
        fill = FRONT_FILL if p.front else POINT_FILL
        radius = "4.5" if p.front else "3.5"
        lines.append(
            f'<circle cx="{_fmt(px(p.x))}" cy="{_fmt(py(p.y))}" r="{radius}" fill="{fill}" '
            f'fill-opacity="0.85" stroke="{FRAME_COLOR}" stroke-width="0.5"/>'
        )
    for p in front_points:
        lines.append(
            f'<text x="{_fmt(px(p.x) + 6)}" y="{_fmt(py(p.y) - 6)}" font-family="monospace" '
            f'font-size="10" fill="{FRAME_COLOR}">{_esc(p.config_id)}</text>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
