"""Tiny self-contained SVG line plots (no plotting runtime needed).

Good enough for the experiment reports: one panel, several labelled series,
optional log axes. Output is deterministic for identical inputs.
"""

from __future__ import annotations

import math
from pathlib import Path

PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)

WIDTH, HEIGHT = 640, 420
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 70, 20, 36, 48


def _transform(values, log):
    out = []
    for v in values:
        if log:
            out.append(math.log10(v) if v > 0 else None)
        else:
            out.append(float(v))
    return out


def _ticks(lo, hi, log):
    if log:
        lo_e, hi_e = math.floor(lo), math.ceil(hi)
        if hi_e == lo_e:
            hi_e += 1
        step = max(1, (hi_e - lo_e) // 6)
        return [(e, f"1e{e}") for e in range(lo_e, hi_e + 1, step)]
    if hi == lo:
        hi = lo + 1.0
    span = hi - lo
    step = 10 ** math.floor(math.log10(span / 4))
    for mult in (1, 2, 5, 10):
        if span / (step * mult) <= 6:
            step *= mult
            break
    first = math.ceil(lo / step) * step
    ticks = []
    t = first
    while t <= hi + 1e-12 * span:
        ticks.append((t, f"{t:g}"))
        t += step
    return ticks


def line_plot_svg(
    path: str | Path,
    series: list[tuple[str, list, list]],
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    log_x: bool = False,
    log_y: bool = False,
) -> None:
    """Write a line plot; series entries are (label, xs, ys)."""
    pts_t = []
    for label, xs, ys in series:
        tx = _transform(xs, log_x)
        ty = _transform(ys, log_y)
        pts_t.append((label, [(a, b) for a, b in zip(tx, ty) if a is not None and b is not None]))

    all_x = [a for _, pts in pts_t for a, _ in pts]
    all_y = [b for _, pts in pts_t for _, b in pts]
    if not all_x:
        all_x, all_y = [0.0, 1.0], [0.0, 1.0]
    lo_x, hi_x = min(all_x), max(all_x)
    lo_y, hi_y = min(all_y), max(all_y)
    if hi_x == lo_x:
        hi_x = lo_x + 1.0
    if hi_y == lo_y:
        hi_y = lo_y + 1.0

    plot_w = WIDTH - MARGIN_L - MARGIN_R
    plot_h = HEIGHT - MARGIN_T - MARGIN_B

    def sx(x):
        return MARGIN_L + (x - lo_x) / (hi_x - lo_x) * plot_w

    def sy(y):
        return MARGIN_T + plot_h - (y - lo_y) / (hi_y - lo_y) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_L}" y="{MARGIN_T}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333" stroke-width="1"/>',
    ]
    if title:
        parts.append(
            f'<text x="{WIDTH/2:.1f}" y="20" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14">{title}</text>'
        )
    for tv, label in _ticks(lo_x, hi_x, log_x):
        if lo_x <= tv <= hi_x:
            x = sx(tv)
            parts.append(
                f'<line x1="{x:.1f}" y1="{MARGIN_T + plot_h}" x2="{x:.1f}" '
                f'y2="{MARGIN_T + plot_h + 5}" stroke="#333"/>'
            )
            parts.append(
                f'<text x="{x:.1f}" y="{MARGIN_T + plot_h + 18}" text-anchor="middle" '
                f'font-family="sans-serif" font-size="11">{label}</text>'
            )
    for tv, label in _ticks(lo_y, hi_y, log_y):
        if lo_y <= tv <= hi_y:
            y = sy(tv)
            parts.append(
                f'<line x1="{MARGIN_L - 5}" y1="{y:.1f}" x2="{MARGIN_L}" y2="{y:.1f}" stroke="#333"/>'
            )
            parts.append(
                f'<text x="{MARGIN_L - 8}" y="{y + 4:.1f}" text-anchor="end" '
                f'font-family="sans-serif" font-size="11">{label}</text>'
            )
    if xlabel:
        parts.append(
            f'<text x="{MARGIN_L + plot_w/2:.1f}" y="{HEIGHT - 10}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{xlabel}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="16" y="{MARGIN_T + plot_h/2:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12" '
            f'transform="rotate(-90 16 {MARGIN_T + plot_h/2:.1f})">{ylabel}</text>'
        )
    for k, (label, pts) in enumerate(pts_t):
        color = PALETTE[k % len(PALETTE)]
        if pts:
            coords = " ".join(f"{sx(a):.2f},{sy(b):.2f}" for a, b in pts)
            parts.append(
                f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>'
            )
        ly = MARGIN_T + 14 + 16 * k
        parts.append(
            f'<line x1="{MARGIN_L + plot_w - 150}" y1="{ly - 4}" '
            f'x2="{MARGIN_L + plot_w - 126}" y2="{ly - 4}" stroke="{color}" stroke-width="2"/>'
        )
        parts.append(
            f'<text x="{MARGIN_L + plot_w - 120}" y="{ly}" font-family="sans-serif" '
            f'font-size="11">{label}</text>'
        )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n")
