"""Dependency-free SVG emission: line charts and field heat maps.

Plots are a convenience for eyeballing runs, not a measured surface; the
drawing is deliberately minimal (one polyline per chart, a rect raster for
heat maps with a blue-white-red ramp).
"""

import numpy as np

_W, _H = 640, 400
_MARGIN = 50


def _finite(xs, ys):
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = np.isfinite(xs) & np.isfinite(ys)
    return xs[keep], ys[keep]


def line_chart(xs, ys, title="", xlabel="t", ylabel=""):
    """Single-series line chart as an SVG string."""
    xs, ys = _finite(xs, ys)
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
             f'viewBox="0 0 {_W} {_H}">',
             f'<rect width="{_W}" height="{_H}" fill="white"/>']
    if xs.size >= 2:
        x0, x1 = float(xs.min()), float(xs.max())
        y0, y1 = float(ys.min()), float(ys.max())
        if x1 == x0:
            x1 = x0 + 1.0
        if y1 == y0:
            y0, y1 = y0 - 1.0, y1 + 1.0
        pad_y = 0.05 * (y1 - y0)
        y0, y1 = y0 - pad_y, y1 + pad_y

        def px(x):
            return _MARGIN + (x - x0) / (x1 - x0) * (_W - 2 * _MARGIN)

        def py(y):
            return _H - _MARGIN - (y - y0) / (y1 - y0) * (_H - 2 * _MARGIN)

        pts = " ".join(f"{px(x):.2f},{py(y):.2f}" for x, y in zip(xs, ys))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="#1f6fb2" stroke-width="1.5"/>')
        parts.append(f'<line x1="{_MARGIN}" y1="{_H - _MARGIN}" x2="{_W - _MARGIN}" '
                     f'y2="{_H - _MARGIN}" stroke="black"/>')
        parts.append(f'<line x1="{_MARGIN}" y1="{_MARGIN}" x2="{_MARGIN}" '
                     f'y2="{_H - _MARGIN}" stroke="black"/>')
        for frac in (0.0, 0.5, 1.0):
            xv = x0 + frac * (x1 - x0)
            yv = y0 + frac * (y1 - y0)
            parts.append(f'<text x="{px(xv):.1f}" y="{_H - _MARGIN + 16}" font-size="11" '
                         f'text-anchor="middle">{xv:.4g}</text>')
            parts.append(f'<text x="{_MARGIN - 6}" y="{py(yv):.1f}" font-size="11" '
                         f'text-anchor="end">{yv:.4g}</text>')
    parts.append(f'<text x="{_W / 2}" y="20" font-size="14" text-anchor="middle">{title}</text>')
    parts.append(f'<text x="{_W / 2}" y="{_H - 8}" font-size="12" '
                 f'text-anchor="middle">{xlabel}</text>')
    parts.append(f'<text x="14" y="{_H / 2}" font-size="12" text-anchor="middle" '
                 f'transform="rotate(-90 14 {_H / 2})">{ylabel}</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def _ramp(v):
    """v in [0, 1] -> blue-white-red hex color."""
    v = min(max(float(v), 0.0), 1.0)
    if v < 0.5:
        s = v / 0.5
        r, g, b = int(255 * s), int(255 * s), 255
    else:
        s = (v - 0.5) / 0.5
        r, g, b = 255, int(255 * (1 - s)), int(255 * (1 - s))
    return f"#{r:02x}{g:02x}{b:02x}"


def heat_map(values, title="", max_cells=128):
    """Field raster as an SVG string; large fields are strided down."""
    vals = np.asarray(values, dtype=float)
    stride = max(1, vals.shape[0] // max_cells)
    vals = vals[::stride, ::stride]
    n = vals.shape[0]
    lo, hi = float(np.nanmin(vals)), float(np.nanmax(vals))
    if hi == lo:
        hi = lo + 1.0
    side = 520
    cell = side / n
    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{side + 40}" '
             f'height="{side + 60}" viewBox="0 0 {side + 40} {side + 60}">',
             f'<rect width="{side + 40}" height="{side + 60}" fill="white"/>',
             f'<text x="{(side + 40) / 2}" y="20" font-size="14" '
             f'text-anchor="middle">{title} [{lo:.3g}, {hi:.3g}]</text>']
    for i in range(n):
        for j in range(n):
            v = (vals[i, j] - lo) / (hi - lo)
            x = 20 + i * cell
            y = 30 + (n - 1 - j) * cell
            parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{cell + 0.5:.2f}" '
                         f'height="{cell + 0.5:.2f}" fill="{_ramp(v)}"/>')
    parts.append("</svg>")
    return "\n".join(parts)
