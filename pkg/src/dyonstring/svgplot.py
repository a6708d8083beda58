"""Minimal SVG line plots, no plotting library required."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

PANEL_W, PANEL_H = 420, 260
MARGIN_L, MARGIN_R, MARGIN_T, MARGIN_B = 64, 16, 28, 40
MAX_POINTS = 1500


def _fmt(x: float) -> str:
    return f"{x:.4g}"


def _ticks(lo: float, hi: float, n: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    return [lo + (hi - lo) * k / (n - 1) for k in range(n)]


def _panel(x, y, title, xlabel, ox, oy) -> list[str]:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = np.isfinite(x) & np.isfinite(y)
    x, y = x[ok], y[ok]
    if len(x) > MAX_POINTS:
        idx = np.unique(np.linspace(0, len(x) - 1, MAX_POINTS).round().astype(int))
        x, y = x[idx], y[idx]
    w = PANEL_W - MARGIN_L - MARGIN_R
    h = PANEL_H - MARGIN_T - MARGIN_B
    x0, y0 = ox + MARGIN_L, oy + MARGIN_T
    out = [f'<text x="{ox + PANEL_W / 2:.1f}" y="{oy + 18}" text-anchor="middle" '
           f'font-size="14">{title}</text>',
           f'<rect x="{x0}" y="{y0}" width="{w}" height="{h}" fill="none" stroke="black"/>',
           f'<text x="{x0 + w / 2:.1f}" y="{oy + PANEL_H - 6}" text-anchor="middle" '
           f'font-size="12">{xlabel}</text>']
    if len(x) == 0:
        out.append(f'<text x="{x0 + w / 2:.1f}" y="{y0 + h / 2:.1f}" text-anchor="middle" '
                   f'font-size="12">no data</text>')
        return out
    xmin, xmax = float(x.min()), float(x.max())
    ymin, ymax = float(y.min()), float(y.max())
    if xmax == xmin:
        xmin, xmax = xmin - 0.5, xmax + 0.5
    if ymax == ymin:
        pad = 0.5 * max(abs(ymin), 1.0)
        ymin, ymax = ymin - pad, ymax + pad
    px = x0 + (x - xmin) / (xmax - xmin) * w
    py = y0 + h - (y - ymin) / (ymax - ymin) * h
    for t in _ticks(xmin, xmax):
        tx = x0 + (t - xmin) / (xmax - xmin) * w
        out.append(f'<text x="{tx:.1f}" y="{y0 + h + 14}" text-anchor="middle" '
                   f'font-size="10">{_fmt(t)}</text>')
    for t in _ticks(ymin, ymax):
        ty = y0 + h - (t - ymin) / (ymax - ymin) * h
        out.append(f'<text x="{x0 - 4}" y="{ty + 3:.1f}" text-anchor="end" '
                   f'font-size="10">{_fmt(t)}</text>')
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
    out.append(f'<polyline points="{pts}" fill="none" stroke="#1f4e9c" stroke-width="1.2"/>')
    if len(x) < 200:
        out.extend(f'<circle cx="{a:.2f}" cy="{b:.2f}" r="2" fill="#1f4e9c"/>'
                   for a, b in zip(px, py))
    return out


def write_panels(path: str | Path, panels: Sequence[tuple], columns: int = 2,
                 xlabel: str = "r") -> None:
    """Write ``panels`` (sequence of ``(title, x, y)``) as a grid of line plots."""
    rows = (len(panels) + columns - 1) // columns
    width, height = columns * PANEL_W, max(rows, 1) * PANEL_H
    body = []
    for i, (title, x, y) in enumerate(panels):
        ox, oy = (i % columns) * PANEL_W, (i // columns) * PANEL_H
        body.extend(_panel(x, y, title, xlabel, ox, oy))
    svg = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
           f'viewBox="0 0 {width} {height}" font-family="sans-serif">',
           f'<rect width="{width}" height="{height}" fill="white"/>', *body, "</svg>"]
    Path(path).write_text("\n".join(svg) + "\n")
