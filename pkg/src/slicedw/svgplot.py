"""Dependency-free SVG scatter and line plots for run artifacts.

Good enough for eyeballing latent clouds and divergence curves: affine
data-to-pixel mapping, a plain frame, optional per-point colouring by a
scalar value.  Output is deterministic (no timestamps) so artifacts diff
cleanly between runs.
"""

import numpy as np

__all__ = ["scatter_svg", "line_svg"]

_MARGIN = 40.0

# Five-stop colormap, dark blue to yellow.
_STOPS = np.array(
    [
        (68, 1, 84),
        (59, 82, 139),
        (33, 145, 140),
        (94, 201, 98),
        (253, 231, 37),
    ],
    dtype=np.float64,
)


def _colors(values):
    values = np.asarray(values, dtype=np.float64)
    lo, hi = float(values.min()), float(values.max())
    t = np.zeros_like(values) if hi <= lo else (values - lo) / (hi - lo)
    pos = t * (len(_STOPS) - 1)
    idx = np.minimum(pos.astype(int), len(_STOPS) - 2)
    frac = (pos - idx)[:, None]
    rgb = _STOPS[idx] * (1.0 - frac) + _STOPS[idx + 1] * frac
    return [f"#{int(r):02x}{int(g):02x}{int(b):02x}" for r, g, b in np.rint(rgb)]


def _ranges(xs, ys, ranges):
    if ranges is not None:
        (x_lo, x_hi), (y_lo, y_hi) = ranges
    else:
        x_lo, x_hi = float(np.min(xs)), float(np.max(xs))
        y_lo, y_hi = float(np.min(ys)), float(np.max(ys))
    if x_hi <= x_lo:
        x_lo, x_hi = x_lo - 0.5, x_lo + 0.5
    if y_hi <= y_lo:
        y_lo, y_hi = y_lo - 0.5, y_lo + 0.5
    return x_lo, x_hi, y_lo, y_hi


def _open_svg(width, height, title):
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f"<title>{title}</title>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{width - 2 * _MARGIN}" '
        f'height="{height - 2 * _MARGIN}" fill="none" stroke="#888" stroke-width="1"/>',
    ]


def _axis_labels(width, height, x_lo, x_hi, y_lo, y_hi):
    fmt = "{:.3g}".format
    return [
        f'<text x="{_MARGIN}" y="{height - _MARGIN / 3}" font-size="11" fill="#444">{fmt(x_lo)}</text>',
        f'<text x="{width - _MARGIN}" y="{height - _MARGIN / 3}" font-size="11" fill="#444" '
        f'text-anchor="end">{fmt(x_hi)}</text>',
        f'<text x="{_MARGIN / 4}" y="{height - _MARGIN}" font-size="11" fill="#444">{fmt(y_lo)}</text>',
        f'<text x="{_MARGIN / 4}" y="{_MARGIN + 10}" font-size="11" fill="#444">{fmt(y_hi)}</text>',
    ]


def scatter_svg(points, values=None, width=480, height=480, ranges=None, radius=2.0, title="scatter"):
    """Scatter plot of an (n, 2) cloud, optionally coloured by a scalar per point.

    ``ranges`` is ``((x_lo, x_hi), (y_lo, y_hi))``; defaults to the data
    bounds.  Returns the SVG document as a string.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim != 2 or points.shape[1] < 2:
        raise ValueError(f"need an (n, 2) array of points, got shape {points.shape}")
    xs, ys = points[:, 0], points[:, 1]
    x_lo, x_hi, y_lo, y_hi = _ranges(xs, ys, ranges)
    span_x = (width - 2 * _MARGIN) / (x_hi - x_lo)
    span_y = (height - 2 * _MARGIN) / (y_hi - y_lo)
    px = _MARGIN + (xs - x_lo) * span_x
    py = height - _MARGIN - (ys - y_lo) * span_y  # SVG y grows downward
    fills = _colors(values) if values is not None else ["#1f77b4"] * len(px)
    parts = _open_svg(width, height, title)
    parts += _axis_labels(width, height, x_lo, x_hi, y_lo, y_hi)
    for x, y, fill in zip(px, py, fills):
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{radius}" fill="{fill}" fill-opacity="0.7"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


_LINE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def line_svg(xs, series, width=640, height=420, title="curve"):
    """Line plot of named series over shared x values.

    ``series`` maps a label to a y-array of the same length as ``xs``.
    """
    xs = np.asarray(xs, dtype=np.float64)
    if xs.ndim != 1 or xs.size < 2:
        raise ValueError("xs must be a 1-D array with at least two points")
    all_y = np.concatenate([np.asarray(ys, dtype=np.float64) for ys in series.values()])
    x_lo, x_hi, y_lo, y_hi = _ranges(xs, all_y, None)
    span_x = (width - 2 * _MARGIN) / (x_hi - x_lo)
    span_y = (height - 2 * _MARGIN) / (y_hi - y_lo)
    parts = _open_svg(width, height, title)
    parts += _axis_labels(width, height, x_lo, x_hi, y_lo, y_hi)
    for i, (label, ys) in enumerate(series.items()):
        ys = np.asarray(ys, dtype=np.float64)
        if ys.shape != xs.shape:
            raise ValueError(f"series {label!r} length {ys.size} does not match xs length {xs.size}")
        color = _LINE_COLORS[i % len(_LINE_COLORS)]
        coords = " ".join(
            f"{_MARGIN + (x - x_lo) * span_x:.2f},{height - _MARGIN - (y - y_lo) * span_y:.2f}"
            for x, y in zip(xs, ys)
        )
        parts.append(f'<polyline points="{coords}" fill="none" stroke="{color}" stroke-width="1.5"/>')
        parts.append(
            f'<text x="{width - _MARGIN - 8}" y="{_MARGIN + 16 + 14 * i}" font-size="12" '
            f'fill="{color}" text-anchor="end">{label}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
