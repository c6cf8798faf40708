"""CSV and dependency-free SVG writers for trajectories."""

from __future__ import annotations

from typing import Sequence, TextIO

import numpy as np

from .errors import ValidationError
from .simulation import Trajectory

WIDTH = 800
HEIGHT = 500
MARGIN_LEFT = 80
MARGIN_RIGHT = 150
MARGIN_TOP = 30
MARGIN_BOTTOM = 50

COLORS = ["#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"]


def _fmt(x: float) -> str:
    return f"{x:.10g}"


def _shared_times(trajectories: Sequence[Trajectory]) -> np.ndarray:
    if not trajectories:
        raise ValidationError("at least one trajectory is required", key="trajectories")
    times = trajectories[0].grid.times
    for tr in trajectories[1:]:
        if not np.array_equal(tr.grid.times, times):
            raise ValidationError("trajectories do not share one grid", key="trajectories")
    return times


def write_trajectories_csv(trajectories: Sequence[Trajectory], sink: TextIO) -> None:
    """Header ``t,<label>,...`` then one row per grid point, 10 significant digits."""
    times = _shared_times(trajectories)
    sink.write(",".join(["t"] + [tr.label for tr in trajectories]) + "\n")
    columns = [tr.values for tr in trajectories]
    for i, t in enumerate(times):
        sink.write(",".join([_fmt(t)] + [_fmt(col[i]) for col in columns]) + "\n")


def _escape(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _extent(values: np.ndarray) -> tuple[float, float]:
    lo, hi = float(np.min(values)), float(np.max(values))
    if lo == hi:
        lo, hi = lo - 1.0, hi + 1.0
    return lo, hi


def render_svg_chart(
    trajectories: Sequence[Trajectory],
    sink: TextIO,
    title: str = "",
    x_label: str = "t (years)",
    y_label: str = "spot",
) -> None:
    """Overlay every trajectory as a polyline on linear, auto-scaled axes.

    A constant data range is padded by one unit on each side, so a flat series
    sits at mid-height.
    """
    times = _shared_times(trajectories)
    x_lo, x_hi = _extent(times)
    y_lo, y_hi = _extent(np.concatenate([np.asarray(tr.values, dtype=float) for tr in trajectories]))

    left, right = MARGIN_LEFT, WIDTH - MARGIN_RIGHT
    top, bottom = MARGIN_TOP, HEIGHT - MARGIN_BOTTOM

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * (right - left)

    def py(y):
        return bottom - (y - y_lo) / (y_hi - y_lo) * (bottom - top)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
    ]
    if title:
        out.append(
            f'<text x="{(left + right) / 2:.2f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{_escape(title)}</text>'
        )
    out.append(
        f'<g stroke="#000000" stroke-width="1">'
        f'<line x1="{left}" y1="{bottom}" x2="{right}" y2="{bottom}"/>'
        f'<line x1="{left}" y1="{top}" x2="{left}" y2="{bottom}"/></g>'
    )

    font = 'font-family="sans-serif" font-size="11"'
    for value, anchor in ((x_lo, "start"), (x_hi, "end")):
        out.append(
            f'<text class="tick" x="{px(value):.2f}" y="{bottom + 16}" text-anchor="{anchor}" '
            f"{font}>{_fmt(value)}</text>"
        )
    for value in (y_lo, y_hi):
        out.append(
            f'<text class="tick" x="{left - 6}" y="{py(value) + 4:.2f}" text-anchor="end" '
            f"{font}>{_fmt(value)}</text>"
        )
    out.append(
        f'<text x="{(left + right) / 2:.2f}" y="{HEIGHT - 12}" text-anchor="middle" '
        f"{font}>{_escape(x_label)}</text>"
    )
    out.append(
        f'<text x="16" y="{(top + bottom) / 2:.2f}" text-anchor="middle" {font} '
        f'transform="rotate(-90 16 {(top + bottom) / 2:.2f})">{_escape(y_label)}</text>'
    )

    for k, tr in enumerate(trajectories):
        color = COLORS[k % len(COLORS)]
        points = " ".join(f"{px(t):.2f},{py(v):.2f}" for t, v in zip(times, tr.values))
        out.append(
            f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{points}"/>'
        )
        ly = top + 10 + 18 * k
        out.append(
            f'<g class="legend"><line x1="{right + 12}" y1="{ly}" x2="{right + 32}" y2="{ly}" '
            f'stroke="{color}" stroke-width="2"/>'
            f'<text x="{right + 38}" y="{ly + 4}" {font}>{_escape(tr.label)}</text></g>'
        )
    out.append("</svg>")
    sink.write("\n".join(out) + "\n")
