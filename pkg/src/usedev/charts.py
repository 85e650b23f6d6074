"""Grouped bar charts as plain SVG text (no plotting dependency).

Output is byte-deterministic: fixed canvas, fixed palette, values printed
with two decimals.
"""

from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

from .core import round_half_up

WIDTH, HEIGHT = 800, 500
MARGIN_LEFT, MARGIN_RIGHT, MARGIN_TOP, MARGIN_BOTTOM = 70, 20, 60, 110
PALETTE = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1", "#ff9da7")
FONT = 'font-family="Helvetica, Arial, sans-serif"'


def _num(x: float) -> str:
    # coordinates: 2 decimals, trailing zeros dropped
    s = f"{round_half_up(x, 2):.2f}".rstrip("0").rstrip(".")
    return "0" if s == "-0" else s


def _label(v: float) -> str:
    return f"{round_half_up(v, 2):.2f}"


def _nice_max(v: float) -> float:
    for step in (1, 2, 5, 10, 20, 25, 50, 100):
        if v <= step:
            return float(step)
    return float(int(v / 100 + 1) * 100)


def bar_chart(
    title: str,
    groups: Sequence[str],
    series: Sequence[tuple[str, Sequence[float]]],
    y_label: str = "Percent of respondents",
    no_data: bool = False,
) -> str:
    """Render a grouped bar chart; one bar per (group, series) pair."""
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    x0, y0 = MARGIN_LEFT, MARGIN_TOP + plot_h
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="#ffffff"/>',
        f'<text x="{WIDTH // 2}" y="28" text-anchor="middle" font-size="16" {FONT}>{escape(title)}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0 + plot_w}" y2="{y0}" stroke="#333333"/>',
        f'<line x1="{x0}" y1="{MARGIN_TOP}" x2="{x0}" y2="{y0}" stroke="#333333"/>',
        f'<text x="18" y="{MARGIN_TOP + plot_h // 2}" text-anchor="middle" font-size="12" {FONT} '
        f'transform="rotate(-90 18 {MARGIN_TOP + plot_h // 2})">{escape(y_label)}</text>',
    ]
    values = [v for _, vs in series for v in vs]
    if no_data or not groups or not values:
        out.append(
            f'<text x="{x0 + plot_w // 2}" y="{MARGIN_TOP + plot_h // 2}" text-anchor="middle" '
            f'font-size="20" fill="#888888" {FONT}>no data</text>'
        )
        out.append("</svg>")
        return "\n".join(out) + "\n"

    top = _nice_max(max(max(values), 0.0))
    for i in range(5):
        tick = top * i / 4
        y = y0 - plot_h * i / 4
        out.append(f'<line x1="{x0 - 4}" y1="{_num(y)}" x2="{x0}" y2="{_num(y)}" stroke="#333333"/>')
        out.append(
            f'<text x="{x0 - 8}" y="{_num(y + 4)}" text-anchor="end" font-size="11" {FONT}>{_num(tick)}</text>'
        )

    group_w = plot_w / len(groups)
    bar_w = group_w * 0.8 / len(series)
    for g, name in enumerate(groups):
        gx = x0 + g * group_w + group_w * 0.1
        for s, (_, vs) in enumerate(series):
            v = vs[g]
            h = plot_h * max(v, 0.0) / top
            bx = gx + s * bar_w
            out.append(
                f'<rect x="{_num(bx)}" y="{_num(y0 - h)}" width="{_num(bar_w * 0.92)}" height="{_num(h)}" '
                f'fill="{PALETTE[s % len(PALETTE)]}"/>'
            )
            out.append(
                f'<text x="{_num(bx + bar_w * 0.46)}" y="{_num(y0 - h - 4)}" text-anchor="middle" '
                f'font-size="10" {FONT}>{_label(v)}</text>'
            )
        out.append(
            f'<text x="{_num(x0 + (g + 0.5) * group_w)}" y="{y0 + 18}" text-anchor="middle" '
            f'font-size="11" {FONT}>{escape(name)}</text>'
        )

    if len(series) > 1:
        cols = 3
        for s, (name, _) in enumerate(series):
            lx = x0 + (s % cols) * (plot_w / cols)
            ly = y0 + 42 + (s // cols) * 18
            out.append(f'<rect x="{_num(lx)}" y="{ly - 10}" width="12" height="12" fill="{PALETTE[s % len(PALETTE)]}"/>')
            out.append(f'<text x="{_num(lx + 18)}" y="{ly}" font-size="11" {FONT}>{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
