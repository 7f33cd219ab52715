import xml.etree.ElementTree as ET

import numpy as np
import pytest

from exprclust import ExpressionMatrix
from exprclust.render import (
    CURVE_MARGIN,
    HEATMAP_MARGIN,
    MARKER_SHAPES,
    PROFILE_MARGIN,
    cluster_color,
    render_heatmap,
    render_index_curves,
    render_profile,
    value_color,
)
from exprclust.runner import IndexCurve

SVG_NS = "{http://www.w3.org/2000/svg}"


def by_class(svg, cls):
    root = ET.fromstring(svg)
    out = []
    for el in root.iter():
        classes = el.get("class", "").split()
        if cls in classes:
            out.append(el)
    return out


def small_matrix(values, labels=None):
    values = np.asarray(values, dtype=float)
    n, d = values.shape
    return ExpressionMatrix(
        values, [f"g{i + 1}" for i in range(n)], [f"c{j + 1}" for j in range(d)]
    )


def test_color_map_anchors():
    assert value_color(-3.0) == "#0000ff"
    assert value_color(0.0) == "#ffffff"
    assert value_color(3.0) == "#ff0000"
    assert value_color(-10.0) == "#0000ff"  # clamped
    assert value_color(10.0) == "#ff0000"
    # midpoints: t = 0.5 each side
    assert value_color(-1.5) == "#8080ff"
    assert value_color(1.5) == "#ff8080"


def test_heatmap_structure_counts():
    m = small_matrix([[0.0, 1.0], [0.5, -1.0], [2.0, 2.0], [-2.0, 0.0]])
    labels = np.array([1, 1, 2, 2])
    svg = render_heatmap(m, labels)
    ET.fromstring(svg)  # well-formed
    assert len(by_class(svg, "cell")) == 8
    assert len(by_class(svg, "separator")) == 1
    assert len(by_class(svg, "legend-swatch")) == 7


def test_heatmap_constant_matrix_single_color():
    m = small_matrix(np.full((3, 3), 1.5))
    svg = render_heatmap(m, np.array([1, 2, 2]))
    fills = {el.get("fill") for el in by_class(svg, "cell")}
    assert fills == {value_color(1.5)}


def test_heatmap_cell_colors_match_colormap_oracle():
    values = np.array([[-3.0, 0.0, 3.0], [1.5, -1.5, 0.3], [2.4, -0.6, 0.9]])
    m = small_matrix(values)
    labels = np.array([1, 1, 2])
    svg = render_heatmap(m, labels)
    cells = by_class(svg, "cell")
    # row order groups cluster 1 (rows 0, 1) then cluster 2 (row 2)
    expected = [value_color(v) for row in (0, 1, 2) for v in values[row]]
    assert [c.get("fill") for c in cells] == expected


def test_heatmap_rows_grouped_by_cluster():
    values = np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]])
    m = small_matrix(values)
    labels = np.array([2, 1, 2, 1])
    svg = render_heatmap(m, labels)
    cells = by_class(svg, "cell")
    first_row_fill = cells[0].get("fill")
    # first rendered row is the first cluster-1 row, which is data row 1
    assert first_row_fill == value_color(1.0)


def test_heatmap_errors():
    m = small_matrix([[0.0, 1.0], [1.0, 0.0]])
    with pytest.raises(ValueError, match="length"):
        render_heatmap(m, np.array([1, 1, 2]))
    with pytest.raises(ValueError, match="empty"):
        render_heatmap(m, np.array([]))


def test_profile_structure():
    m = small_matrix(np.random.default_rng(0).normal(size=(5, 4)))
    labels = np.array([1, 1, 2, 2, 2])
    svg = render_profile(m, labels)
    ET.fromstring(svg)
    polylines = by_class(svg, "profile")
    assert len(polylines) == 5
    assert len(by_class(svg, "legend-entry")) == 2
    colors = {p.get("stroke") for p in polylines}
    assert colors == {cluster_color(1), cluster_color(2)}


def test_profile_single_cluster_one_legend_entry():
    m = small_matrix(np.random.default_rng(1).normal(size=(3, 4)))
    svg = render_profile(m, np.array([1, 1, 1]))
    assert len(by_class(svg, "legend-entry")) == 1


def test_profile_coordinates_match_affine_oracle():
    values = np.array([[0.0, 2.0, 4.0], [4.0, 0.0, 2.0]])
    m = small_matrix(values)
    width = height = 400
    svg = render_profile(m, np.array([1, 2]), width=width, height=height)
    mg = PROFILE_MARGIN
    plot_w = width - mg["left"] - mg["right"]
    plot_h = height - mg["top"] - mg["bottom"]
    lo, hi = 0.0, 4.0

    def expect(j, v):
        x = mg["left"] + j * plot_w / 2
        y = mg["top"] + (hi - v) * plot_h / (hi - lo)
        return f"{x:.2f},{y:.2f}"

    polylines = by_class(svg, "profile")
    got_first = polylines[0].get("points").split()
    assert got_first == [expect(0, 0.0), expect(1, 2.0), expect(2, 4.0)]
    got_second = polylines[1].get("points").split()
    assert got_second == [expect(0, 4.0), expect(1, 0.0), expect(2, 2.0)]


def make_curves(n_algorithms=4, ks=(2, 3, 4, 5, 6, 7), gap_at=None):
    curves = []
    rng = np.random.default_rng(5)
    for i, alg in enumerate(["kmeans", "fcm", "hier", "mocsvm"][:n_algorithms]):
        points = []
        for k in ks:
            if gap_at is not None and alg == "kmeans" and k == gap_at:
                points.append((k, None))
            else:
                points.append((k, float(rng.random())))
        curves.append(IndexCurve(alg, "silhouette", points))
    return curves


def test_curves_structure():
    svg = render_index_curves(make_curves())
    ET.fromstring(svg)
    for alg in ("kmeans", "fcm", "hier", "mocsvm"):
        assert len(by_class(svg, f"curve-{alg}")) >= 1
        assert len(by_class(svg, f"marker-{alg}")) == 6
    # four distinct marker shapes: circle, rect, and two polygon variants
    root = ET.fromstring(svg)
    tags = {el.tag for el in root.iter() if "marker" in el.get("class", "")}
    assert SVG_NS + "circle" in tags
    assert SVG_NS + "rect" in tags
    assert SVG_NS + "polygon" in tags
    legend = [el.text for el in by_class(svg, "legend-entry")]
    assert "silhouette/kmeans" in legend
    assert "silhouette/mocsvm" in legend


def test_curves_gap_splits_polyline():
    svg = render_index_curves(make_curves(n_algorithms=1, gap_at=4))
    segments = by_class(svg, "curve-kmeans")
    assert len(segments) == 2  # points 2-3, then 5-7
    assert len(by_class(svg, "marker-kmeans")) == 5


def test_curve_ticks_evenly_spaced():
    width = 760
    svg = render_index_curves(make_curves(), width=width)
    ticks = by_class(svg, "tick")
    xs = sorted(float(t.get("x1")) for t in ticks)
    assert len(xs) == 6
    mg = CURVE_MARGIN
    plot_w = width - mg["left"] - mg["right"]
    expected = [mg["left"] + i * plot_w / 5 for i in range(6)]
    np.testing.assert_allclose(xs, expected, atol=0.02)


def test_curves_errors():
    with pytest.raises(ValueError):
        render_index_curves([])
    all_none = [IndexCurve("kmeans", "db", [(2, None), (3, None)])]
    with pytest.raises(ValueError):
        render_index_curves(all_none)


def test_svgs_are_self_contained():
    m = small_matrix(np.random.default_rng(2).normal(size=(4, 3)))
    labels = np.array([1, 2, 1, 2])
    for svg in (
        render_heatmap(m, labels),
        render_profile(m, labels),
        render_index_curves(make_curves()),
    ):
        ET.fromstring(svg)
        assert "http://" not in svg.replace("http://www.w3.org/2000/svg", "")
        assert "href" not in svg
