"""Server-side SVG rendering: heatmaps, cluster profile plots, index curves.

All output is self-contained SVG with no external assets, deterministic for
fixed inputs so renders can be golden-file tested.

The heatmap color map is piecewise-linear blue-white-red over the value
range [-3, 3] (clamped): v <= 0 interpolates #0000ff -> #ffffff on
t = (v+3)/3, v >= 0 interpolates #ffffff -> #ff0000 on t = v/3.

Plot rectangles are defined by the margin constants below; the x position of
column j out of d is left + j*(width-left-right)/(d-1), and the y position of
value v over the range [lo, hi] is top + (hi-v)*(height-top-bottom)/(hi-lo).
"""

from __future__ import annotations

from xml.sax.saxutils import escape

import numpy as np

from .partitional import Partition

PALETTE = (
    "#1f77b4",
    "#d62728",
    "#2ca02c",
    "#9467bd",
    "#ff7f0e",
    "#8c564b",
    "#e377c2",
    "#17becf",
)
MARKER_SHAPES = ("circle", "square", "triangle", "diamond")

HEATMAP_MARGIN = {"left": 80.0, "right": 140.0, "top": 30.0, "bottom": 50.0}
PROFILE_MARGIN = {"left": 60.0, "right": 130.0, "top": 20.0, "bottom": 45.0}
CURVE_MARGIN = {"left": 60.0, "right": 170.0, "top": 20.0, "bottom": 45.0}

COLOR_SCALE_LIMIT = 3.0

__all__ = [
    "PALETTE",
    "MARKER_SHAPES",
    "HEATMAP_MARGIN",
    "PROFILE_MARGIN",
    "CURVE_MARGIN",
    "COLOR_SCALE_LIMIT",
    "value_color",
    "cluster_color",
    "render_heatmap",
    "render_profile",
    "render_index_curves",
]


def value_color(v: float) -> str:
    """Diverging blue-white-red color for a value, clamped to [-3, 3]."""
    lim = COLOR_SCALE_LIMIT
    v = min(max(float(v), -lim), lim)
    if v <= 0:
        t = (v + lim) / lim
        r = g = round(255 * t)
        b = 255
    else:
        t = v / lim
        r = 255
        g = b = round(255 * (1 - t))
    return f"#{r:02x}{g:02x}{b:02x}"


def cluster_color(cluster: int) -> str:
    return PALETTE[(cluster - 1) % len(PALETTE)]


def _labels_array(partition, n: int) -> np.ndarray:
    labels = partition.labels if isinstance(partition, Partition) else np.asarray(partition, dtype=int)
    if labels.size == 0:
        raise ValueError("empty partition")
    if len(labels) != n:
        raise ValueError(f"partition length {len(labels)} != row count {n}")
    return labels


def _svg_open(width, height, parts):
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">'
    )
    parts.append(f'<rect class="bg" x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>')


def _text(parts, x, y, s, cls="label", anchor="start", size=10):
    parts.append(
        f'<text class="{cls}" x="{x:.2f}" y="{y:.2f}" font-size="{size}" '
        f'font-family="sans-serif" text-anchor="{anchor}">{escape(str(s))}</text>'
    )


def _marker(parts, shape: str, x: float, y: float, color: str, cls: str):
    r = 4.0
    if shape == "circle":
        parts.append(f'<circle class="{cls}" cx="{x:.2f}" cy="{y:.2f}" r="{r}" fill="{color}"/>')
    elif shape == "square":
        parts.append(
            f'<rect class="{cls}" x="{x - r:.2f}" y="{y - r:.2f}" width="{2 * r}" '
            f'height="{2 * r}" fill="{color}"/>'
        )
    elif shape == "triangle":
        pts = f"{x:.2f},{y - r:.2f} {x - r:.2f},{y + r:.2f} {x + r:.2f},{y + r:.2f}"
        parts.append(f'<polygon class="{cls}" points="{pts}" fill="{color}"/>')
    else:  # diamond
        pts = f"{x:.2f},{y - r:.2f} {x + r:.2f},{y:.2f} {x:.2f},{y + r:.2f} {x - r:.2f},{y:.2f}"
        parts.append(f'<polygon class="{cls}" points="{pts}" fill="{color}"/>')


def render_heatmap(data, partition, width: int = 760, height: int = 520) -> str:
    """Cluster-grouped heatmap: conditions on X, gene ids on Y, color legend.

    Rows are regrouped by cluster (original order within each cluster) and a
    separator line is drawn between consecutive clusters.
    """
    values = data.values
    n, d = values.shape
    labels = _labels_array(partition, n)
    k = int(labels.max())
    m = HEATMAP_MARGIN
    plot_w = width - m["left"] - m["right"]
    plot_h = height - m["top"] - m["bottom"]
    cw, ch = plot_w / d, plot_h / n

    order = np.concatenate([np.where(labels == c)[0] for c in range(1, k + 1)])
    parts: list[str] = []
    _svg_open(width, height, parts)
    for r, idx in enumerate(order):
        y = m["top"] + r * ch
        for j in range(d):
            parts.append(
                f'<rect class="cell" x="{m["left"] + j * cw:.2f}" y="{y:.2f}" '
                f'width="{cw:.2f}" height="{ch:.2f}" fill="{value_color(values[idx, j])}"/>'
            )
    # separators between cluster groups
    cum = 0
    for c in range(1, k):
        cum += int(np.sum(labels == c))
        y = m["top"] + cum * ch
        parts.append(
            f'<line class="separator" x1="{m["left"]:.2f}" y1="{y:.2f}" '
            f'x2="{m["left"] + plot_w:.2f}" y2="{y:.2f}" stroke="#000000" stroke-width="2"/>'
        )
    # axis labels
    row_step = max(1, int(np.ceil(n / 60)))
    for r, idx in enumerate(order):
        if r % row_step == 0:
            _text(parts, m["left"] - 6, m["top"] + (r + 0.7) * ch,
                  data.gene_ids[idx], cls="ylabel", anchor="end", size=8)
    for j, cond in enumerate(data.condition_ids):
        _text(parts, m["left"] + (j + 0.5) * cw, m["top"] + plot_h + 14,
              cond, cls="xlabel", anchor="middle", size=9)
    # color legend
    lx = m["left"] + plot_w + 20
    lim = COLOR_SCALE_LIMIT
    for i, v in enumerate(np.linspace(lim, -lim, 7)):
        ly = m["top"] + i * 18
        parts.append(
            f'<rect class="legend-swatch" x="{lx:.2f}" y="{ly:.2f}" width="14" height="14" '
            f'fill="{value_color(v)}"/>'
        )
        _text(parts, lx + 20, ly + 11, f"{v:+.1f}", cls="legend-label", size=9)
    parts.append("</svg>")
    return "\n".join(parts)


def render_profile(data, partition, width: int = 760, height: int = 520) -> str:
    """One expression polyline per gene, colored by cluster, with a cluster legend."""
    values = data.values
    n, d = values.shape
    labels = _labels_array(partition, n)
    m = PROFILE_MARGIN
    plot_w = width - m["left"] - m["right"]
    plot_h = height - m["top"] - m["bottom"]
    lo, hi = float(values.min()), float(values.max())

    def xpos(j):
        return m["left"] + (j * plot_w / (d - 1) if d > 1 else plot_w / 2)

    def ypos(v):
        if hi == lo:
            return m["top"] + plot_h / 2
        return m["top"] + (hi - v) * plot_h / (hi - lo)

    parts: list[str] = []
    _svg_open(width, height, parts)
    parts.append(
        f'<rect class="frame" x="{m["left"]:.2f}" y="{m["top"]:.2f}" width="{plot_w:.2f}" '
        f'height="{plot_h:.2f}" fill="none" stroke="#cccccc"/>'
    )
    for i in range(n):
        pts = " ".join(f"{xpos(j):.2f},{ypos(values[i, j]):.2f}" for j in range(d))
        parts.append(
            f'<polyline class="profile" points="{pts}" fill="none" '
            f'stroke="{cluster_color(int(labels[i]))}" stroke-width="1"/>'
        )
    for j, cond in enumerate(data.condition_ids):
        _text(parts, xpos(j), m["top"] + plot_h + 16, cond, cls="xlabel", anchor="middle", size=9)
    lx = m["left"] + plot_w + 20
    for pos, c in enumerate(sorted(np.unique(labels))):
        ly = m["top"] + pos * 20
        parts.append(
            f'<rect class="legend-entry" x="{lx:.2f}" y="{ly:.2f}" width="14" height="14" '
            f'fill="{cluster_color(int(c))}"/>'
        )
        _text(parts, lx + 20, ly + 11, f"cluster {int(c)}", cls="legend-label", size=10)
    parts.append("</svg>")
    return "\n".join(parts)


def render_index_curves(curves, width: int = 760, height: int = 520) -> str:
    """Index-vs-K lines, one color and marker shape per algorithm.

    Excluded cells (None values) leave a gap in the polyline.  The X axis
    carries one tick per integer k in the grid range.
    """
    if not curves:
        raise ValueError("no curves to render")
    m = CURVE_MARGIN
    plot_w = width - m["left"] - m["right"]
    plot_h = height - m["top"] - m["bottom"]
    ks = sorted({k for curve in curves for k, _v in curve.points})
    vals = [v for curve in curves for _k, v in curve.points if v is not None]
    if not vals:
        raise ValueError("all curve points are excluded")
    k_lo, k_hi = min(ks), max(ks)
    v_lo, v_hi = min(vals), max(vals)
    if v_hi == v_lo:
        v_lo, v_hi = v_lo - 1.0, v_hi + 1.0
    pad = 0.05 * (v_hi - v_lo)
    v_lo, v_hi = v_lo - pad, v_hi + pad

    def xpos(k):
        return m["left"] + ((k - k_lo) * plot_w / (k_hi - k_lo) if k_hi > k_lo else plot_w / 2)

    def ypos(v):
        return m["top"] + (v_hi - v) * plot_h / (v_hi - v_lo)

    parts: list[str] = []
    _svg_open(width, height, parts)
    parts.append(
        f'<rect class="frame" x="{m["left"]:.2f}" y="{m["top"]:.2f}" width="{plot_w:.2f}" '
        f'height="{plot_h:.2f}" fill="none" stroke="#cccccc"/>'
    )
    for k in ks:
        x = xpos(k)
        parts.append(
            f'<line class="tick" x1="{x:.2f}" y1="{m["top"] + plot_h:.2f}" x2="{x:.2f}" '
            f'y2="{m["top"] + plot_h + 5:.2f}" stroke="#000000"/>'
        )
        _text(parts, x, m["top"] + plot_h + 18, str(k), cls="tick-label", anchor="middle", size=10)
    for i, curve in enumerate(curves):
        color = PALETTE[i % len(PALETTE)]
        shape = MARKER_SHAPES[i % len(MARKER_SHAPES)]
        segment: list[str] = []
        for k, v in curve.points:
            if v is None:
                if len(segment) >= 2:
                    parts.append(
                        f'<polyline class="curve curve-{curve.algorithm}" '
                        f'points="{" ".join(segment)}" fill="none" stroke="{color}" stroke-width="2"/>'
                    )
                segment = []
                continue
            segment.append(f"{xpos(k):.2f},{ypos(v):.2f}")
            _marker(parts, shape, xpos(k), ypos(v), color, f"marker marker-{curve.algorithm}")
        if len(segment) >= 2:
            parts.append(
                f'<polyline class="curve curve-{curve.algorithm}" '
                f'points="{" ".join(segment)}" fill="none" stroke="{color}" stroke-width="2"/>'
            )
        ly = m["top"] + i * 20
        lx = m["left"] + plot_w + 20
        _marker(parts, shape, lx + 7, ly + 7, color, "legend-marker")
        _text(parts, lx + 20, ly + 11, f"{curve.index}/{curve.algorithm}",
              cls="legend-entry", size=10)
    _text(parts, m["left"] + plot_w / 2, height - 6, "number of clusters",
          cls="axis-title", anchor="middle", size=11)
    parts.append("</svg>")
    return "\n".join(parts)
