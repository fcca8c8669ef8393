"""Minimal self-contained SVG line charts and heatmaps (deterministic output)."""
from __future__ import annotations

from html import escape

import numpy as np

WIDTH, HEIGHT = 720, 440
MARGIN = dict(left=70, right=30, top=40, bottom=55)
LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")
# viridis anchor colours, interpolated linearly
_VIRIDIS = np.array([(68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37)],
                    dtype=float)
MAX_COLUMNS = 400


def colormap(v: float) -> str:
    v = min(max(float(v), 0.0), 1.0) * (len(_VIRIDIS) - 1)
    i = min(int(v), len(_VIRIDIS) - 2)
    c = _VIRIDIS[i] + (v - i) * (_VIRIDIS[i + 1] - _VIRIDIS[i])
    return "#{:02x}{:02x}{:02x}".format(*(int(round(x)) for x in c))


def _frame(title, xlabel, ylabel, xlim, ylim):
    x0, x1 = MARGIN["left"], WIDTH - MARGIN["right"]
    y0, y1 = HEIGHT - MARGIN["bottom"], MARGIN["top"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.1f}" y="22" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{x0}" y1="{y0}" x2="{x1}" y2="{y0}" stroke="black"/>',
        f'<line x1="{x0}" y1="{y0}" x2="{x0}" y2="{y1}" stroke="black"/>',
        f'<text x="{(x0 + x1) / 2:.1f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(xlabel)}</text>',
        f'<text x="18" y="{(y0 + y1) / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {(y0 + y1) / 2:.1f})">{escape(ylabel)}</text>',
    ]
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = xlim[0] + frac * (xlim[1] - xlim[0])
        yv = ylim[0] + frac * (ylim[1] - ylim[0])
        px = x0 + frac * (x1 - x0)
        py = y0 + frac * (y1 - y0)
        parts.append(f'<text x="{px:.1f}" y="{y0 + 18}" text-anchor="middle">{xv:.4g}</text>')
        parts.append(f'<text x="{x0 - 6}" y="{py + 4:.1f}" text-anchor="end">{yv:.4g}</text>')

    def to_px(x, y):
        sx = x0 + (np.asarray(x) - xlim[0]) / ((xlim[1] - xlim[0]) or 1.0) * (x1 - x0)
        sy = y0 + (np.asarray(y) - ylim[0]) / ((ylim[1] - ylim[0]) or 1.0) * (y1 - y0)
        return sx, sy

    return parts, to_px


def line_chart(series, title: str, xlabel: str, ylabel: str) -> str:
    """``series`` is a list of ``(label, x, y)``."""
    xs = np.concatenate([np.asarray(s[1], dtype=float) for s in series])
    parts, to_px = _frame(title, xlabel, ylabel, (xs.min(), xs.max()), (0.0, 1.0))
    for i, (label, x, y) in enumerate(series):
        color = LINE_COLORS[i % len(LINE_COLORS)]
        px, py = to_px(x, y)
        points = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
        parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.2" points="{points}"/>')
        if label:
            parts.append(
                f'<text x="{WIDTH - MARGIN["right"] - 4}" y="{MARGIN["top"] + 14 * (i + 1)}" '
                f'text-anchor="end" fill="{color}">{escape(label)}</text>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def heatmap(x, y, z, title: str, xlabel: str, ylabel: str) -> str:
    """``z[j, i]`` is the value at ``(x[i], y[j])`` in [0, 1]; columns are min-pooled."""
    x, y, z = np.asarray(x, float), np.asarray(y, float), np.asarray(z, float)
    if x.size > MAX_COLUMNS:
        edges = np.linspace(0, x.size, MAX_COLUMNS + 1).astype(int)
        z = np.stack([z[:, a:b].min(axis=1) for a, b in zip(edges[:-1], edges[1:])], axis=1)
        x = np.array([x[a:b].mean() for a, b in zip(edges[:-1], edges[1:])])
    parts, to_px = _frame(title, xlabel, ylabel, (x.min(), x.max()), (y.min(), y.max()))
    x_lo, x_hi = MARGIN["left"], WIDTH - MARGIN["right"]
    y_lo, y_hi = MARGIN["top"], HEIGHT - MARGIN["bottom"]
    cw = (x_hi - x_lo) / x.size
    ch = (y_hi - y_lo) / y.size
    for j in range(y.size):
        top = y_hi - (j + 1) * ch
        for i in range(x.size):
            parts.append(
                f'<rect x="{x_lo + i * cw:.2f}" y="{top:.2f}" width="{cw + 0.05:.2f}" '
                f'height="{ch + 0.05:.2f}" fill="{colormap(z[j, i])}"/>'
            )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
