"""Minimal static SVG rendering of curves and histograms."""
from __future__ import annotations

from pathlib import Path
from typing import Sequence

import numpy as np

from .spectra import Histogram

_COLOURS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e")


def render_svg(items: Sequence, title: str = "", width: int = 640, height: int = 400) -> str:
    """SVG text showing histograms as steps and curves as polylines on shared axes."""
    pad = 50
    xs, ys = [], []
    for it in items:
        if isinstance(it, Histogram):
            xs += [it.edges[0], it.edges[-1]]
            ys += [0.0, float(np.max(it.density, initial=0.0))]
        else:
            fin = np.isfinite(it.y)
            xs += [float(np.min(it.x)), float(np.max(it.x))] if it.x.size else []
            ys += [float(np.min(it.y[fin], initial=0.0)), float(np.max(it.y[fin], initial=0.0))]
    x0, x1 = (min(xs), max(xs)) if xs else (0.0, 1.0)
    y0, y1 = (min(ys), max(ys)) if ys else (0.0, 1.0)
    if x1 <= x0:
        x1 = x0 + 1.0
    if y1 <= y0:
        y1 = y0 + 1.0

    def px(x):
        return pad + (np.asarray(x) - x0) / (x1 - x0) * (width - 2 * pad)

    def py(y):
        return height - pad - (np.asarray(y) - y0) / (y1 - y0) * (height - 2 * pad)

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
           '<rect width="100%" height="100%" fill="white"/>',
           f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" stroke="black"/>',
           f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" stroke="black"/>',
           f'<text x="{pad}" y="{height - pad + 20}" font-size="12">{x0:.3g}</text>',
           f'<text x="{width - pad}" y="{height - pad + 20}" font-size="12" text-anchor="end">{x1:.3g}</text>',
           f'<text x="{pad - 5}" y="{height - pad}" font-size="12" text-anchor="end">{y0:.3g}</text>',
           f'<text x="{pad - 5}" y="{pad + 5}" font-size="12" text-anchor="end">{y1:.3g}</text>']
    if title:
        out.append(f'<text x="{width / 2}" y="{pad / 2}" font-size="14" text-anchor="middle">{title}</text>')
    for i, it in enumerate(items):
        col = _COLOURS[i % len(_COLOURS)]
        if isinstance(it, Histogram):
            xe = np.repeat(it.edges, 2)[1:-1]
            ye = np.repeat(it.density, 2)
        else:
            fin = np.isfinite(it.y)
            xe, ye = it.x[fin], it.y[fin]
        pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px(xe), py(ye)))
        out.append(f'<polyline fill="none" stroke="{col}" stroke-width="1.5" points="{pts}"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(path, items: Sequence, title: str = "") -> None:
    Path(path).write_text(render_svg(items, title))
