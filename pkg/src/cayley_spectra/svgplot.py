"""Minimal polyline SVG line plots, written without a plotting dependency.

Output is deterministic: fixed canvas, fixed formatting, no timestamps.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

WIDTH = 1000
HEIGHT = 600
MARGIN_LEFT = 80
MARGIN_RIGHT = 30
MARGIN_TOP = 50
MARGIN_BOTTOM = 60

_PALETTE = (
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
)


def _fmt(x: float) -> str:
    return f"{x:.3f}"


def _ticks(lo: float, hi: float, count: int = 6) -> list[float]:
    if hi <= lo:
        hi = lo + 1.0
    raw = (hi - lo) / max(count - 1, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 2.5, 5.0, 10.0):
        step = mult * mag
        if step >= raw:
            break
    start = math.ceil(lo / step) * step
    ticks = []
    t = start
    while t <= hi + 1e-12 * max(abs(hi), 1.0):
        ticks.append(round(t, 12))
        t += step
    return ticks


def line_plot_svg(
    x: np.ndarray,
    ys: np.ndarray,
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
    vlines: Sequence[tuple[float, str]] = (),
) -> str:
    """SVG document with one polyline per column of ys over x.

    vlines are (position, label) pairs marking special x locations.
    """
    x = np.asarray(x, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if ys.ndim == 1:
        ys = ys[:, None]
    x_lo, x_hi = float(x.min()), float(x.max())
    y_lo, y_hi = float(ys.min()), float(ys.max())
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    pad = 0.04 * (y_hi - y_lo)
    y_lo, y_hi = y_lo - pad, y_hi + pad
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def px(v: float) -> float:
        return MARGIN_LEFT + (v - x_lo) / (x_hi - x_lo) * plot_w

    def py(v: float) -> float:
        return MARGIN_TOP + (y_hi - v) / (y_hi - y_lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="#333333" stroke-width="1"/>',
    ]
    if title:
        out.append(
            f'<text x="{WIDTH / 2:.1f}" y="28" text-anchor="middle" '
            f'font-family="sans-serif" font-size="18">{title}</text>'
        )
    for t in _ticks(x_lo, x_hi):
        xp = px(t)
        out.append(
            f'<line x1="{_fmt(xp)}" y1="{MARGIN_TOP + plot_h}" x2="{_fmt(xp)}" '
            f'y2="{MARGIN_TOP + plot_h + 5}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{_fmt(xp)}" y="{MARGIN_TOP + plot_h + 22}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="12">{t:g}</text>'
        )
    for t in _ticks(y_lo, y_hi):
        yp = py(t)
        out.append(
            f'<line x1="{MARGIN_LEFT - 5}" y1="{_fmt(yp)}" x2="{MARGIN_LEFT}" '
            f'y2="{_fmt(yp)}" stroke="#333333"/>'
        )
        out.append(
            f'<text x="{MARGIN_LEFT - 10}" y="{_fmt(yp + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="12">{t:g}</text>'
        )
    if xlabel:
        out.append(
            f'<text x="{MARGIN_LEFT + plot_w / 2:.1f}" y="{HEIGHT - 15}" '
            f'text-anchor="middle" font-family="sans-serif" font-size="14">{xlabel}</text>'
        )
    if ylabel:
        yc = MARGIN_TOP + plot_h / 2
        out.append(
            f'<text x="22" y="{yc:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="14" '
            f'transform="rotate(-90 22 {yc:.1f})">{ylabel}</text>'
        )
    for pos, label in vlines:
        xp = px(pos)
        out.append(
            f'<line x1="{_fmt(xp)}" y1="{MARGIN_TOP}" x2="{_fmt(xp)}" '
            f'y2="{MARGIN_TOP + plot_h}" stroke="#d62728" stroke-width="1.5" '
            'stroke-dasharray="6,4"/>'
        )
        if label:
            out.append(
                f'<text x="{_fmt(xp + 5)}" y="{MARGIN_TOP + 16}" '
                f'font-family="sans-serif" font-size="12" fill="#d62728">{label}</text>'
            )
    for j in range(ys.shape[1]):
        color = _PALETTE[j % len(_PALETTE)]
        points = " ".join(f"{_fmt(px(xv))},{_fmt(py(yv))}" for xv, yv in zip(x, ys[:, j]))
        out.append(
            f'<polyline points="{points}" fill="none" stroke="{color}" stroke-width="1"/>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
