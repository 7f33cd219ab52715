import json
import time

import numpy as np
import pytest

from exprclust import ExpressionMatrix
from exprclust.runner import (
    Cell,
    GridSpec,
    GridSpecError,
    best_of,
    derive_seed,
    grid_spec_from_json,
    load_labels,
    persist_labels,
    report_json_text,
    run_grid,
    _run_cell,
)
from exprclust.validity import evaluate_internal, index_spec


def small_spec(out=None, **overrides):
    base = dict(
        algorithms={"kmeans": {}, "hier": {"metric": "euclidean", "linkage": "average"}},
        k_min=2,
        k_max=4,
        iterations=2,
        internal_index=index_spec("silhouette"),
        external_indices=(index_spec("ari"), index_spec("minkowski"), index_spec("percent")),
        base_seed=7,
        output_dir=out,
    )
    base.update(overrides)
    return GridSpec(**base)


def test_derive_seed_stable_and_distinct():
    s = derive_seed(42, "kmeans", 3, 1)
    assert s == derive_seed(42, "kmeans", 3, 1)
    others = {
        derive_seed(42, "kmeans", 3, 2),
        derive_seed(42, "kmeans", 4, 1),
        derive_seed(42, "fcm", 3, 1),
        derive_seed(43, "kmeans", 3, 1),
    }
    assert s not in others
    assert len(others) == 4
    assert 0 <= s < 2**64


def test_best_of_tie_prefers_smaller_k():
    cells = [Cell(2, 1, 0.4, None), Cell(3, 1, 0.7, None), Cell(4, 1, 0.7, None)]
    assert best_of(cells, "maximize").k == 3
    assert best_of([Cell(2, 1, 0.1, None)], "minimize").value == 0.1
    with pytest.raises(ValueError):
        best_of([], "maximize")


def test_best_of_matches_sort_oracle():
    rng = np.random.default_rng(3)
    for _ in range(50):
        cells = [
            Cell(int(k), int(i), float(v), None)
            for k, i, v in zip(
                rng.integers(2, 8, 10), rng.integers(1, 3, 10), rng.integers(0, 5, 10)
            )
        ]
        expected_max = sorted(cells, key=lambda c: (-c.value, c.k))[0]
        got = best_of(cells, "maximize")
        assert (got.value, got.k) == (expected_max.value, expected_max.k)
        expected_min = sorted(cells, key=lambda c: (c.value, c.k))[0]
        got = best_of(cells, "minimize")
        assert (got.value, got.k) == (expected_min.value, expected_min.k)


def test_persist_labels_format_and_round_trip(tmp_path):
    path = persist_labels(np.array([1, 1, 2]), tmp_path, "kmeans_k2_silhouette")
    assert open(path).read() == "1\n1\n2\n"
    assert load_labels(path).tolist() == [1, 1, 2]


def test_persist_labels_collision_suffix(tmp_path, monkeypatch):
    monkeypatch.setattr(time, "strftime", lambda fmt: "20260101-000000")
    p1 = persist_labels(np.array([1, 2]), tmp_path, "fcm_k2_db")
    p2 = persist_labels(np.array([1, 2]), tmp_path, "fcm_k2_db")
    p3 = persist_labels(np.array([1, 2]), tmp_path, "fcm_k2_db")
    assert len({p1, p2, p3}) == 3
    assert p2.endswith("-1.labels") and p3.endswith("-2.labels")


def test_run_grid_blobs(blobs200, tmp_path):
    data, truth = blobs200
    spec = small_spec(out=str(tmp_path))
    result = run_grid(data, spec)
    assert set(result.report.internal) == {"kmeans", "hier"}
    for alg in ("kmeans", "hier"):
        row = result.report.internal[alg]
        assert row.k == 4
        assert row.labels_file is not None
        assert load_labels(row.labels_file).tolist() == result.best_labels[alg].tolist()
        ext = result.report.external[alg]
        assert ext["ari"].value == 1.0
        assert ext["minkowski"].value == 0.0
        assert ext["percent"].value == 100.0
    for curve in result.curves:
        assert [k for k, _v in curve.points] == [2, 3, 4]
        values = [v for _k, v in curve.points if v is not None]
        row = result.report.internal[curve.algorithm]
        assert row.value == max(values)


def test_degenerate_grid_single_cell(blobs200):
    data, _ = blobs200
    spec = small_spec(k_min=3, k_max=3, iterations=1, external_indices=())
    result = run_grid(data, spec)
    for curve in result.curves:
        assert len(curve.points) == 1
        assert result.report.internal[curve.algorithm].k == 3


def test_cells_replayable_from_derived_seeds(blobs200):
    data, _ = blobs200
    spec = small_spec(external_indices=(), algorithms={"kmeans": {}})
    result = run_grid(data, spec)
    curve = result.curves[0]
    idx = spec.internal_index
    for k, value in curve.points:
        best = None
        for iteration in (1, 2):
            seed = derive_seed(spec.base_seed, "kmeans", k, iteration)
            labels, _ = _run_cell(data, "kmeans", k, {}, seed)
            v = evaluate_internal(idx, data, labels)
            best = v if best is None else max(best, v)
        assert value == pytest.approx(best, rel=1e-12)


def test_deterministic_replay(blobs200):
    data, _ = blobs200
    spec = small_spec()
    r1 = run_grid(data, spec)
    r2 = run_grid(data, spec)
    assert report_json_text(r1.report, include_timings=False) == report_json_text(
        r2.report, include_timings=False
    )


def test_true_labels_as_fake_algorithm_output(blobs200):
    data, truth = blobs200
    from exprclust.validity import evaluate_external

    assert evaluate_external(index_spec("ari"), truth, truth) == 1.0
    assert evaluate_external(index_spec("minkowski"), truth, truth) == 0.0
    assert evaluate_external(index_spec("percent"), truth, truth) == 100.0


def test_failed_algorithm_does_not_block_others():
    rng = np.random.default_rng(0)
    values = rng.normal(size=(12, 3))
    values[0] = 5.0  # constant row: correlation distance undefined
    data = ExpressionMatrix(values, [f"g{i}" for i in range(12)], ["a", "b", "c"])
    spec = small_spec(
        algorithms={
            "kmeans": {},
            "hier": {"metric": "correlation", "linkage": "average"},
        },
        external_indices=(),
    )
    result = run_grid(data, spec)
    assert "hier" in result.report.failed
    assert "kmeans" in result.report.internal


def test_grid_spec_validation(blobs200):
    data, _ = blobs200
    with pytest.raises(GridSpecError) as exc:
        small_spec(k_max=500).validate(data.n_genes)
    assert exc.value.field == "k_max"
    with pytest.raises(GridSpecError):
        small_spec(k_min=1).validate(data.n_genes)
    with pytest.raises(GridSpecError):
        small_spec(algorithms={"dbscan": {}}).validate(data.n_genes)
    with pytest.raises(GridSpecError):
        small_spec(internal_index=index_spec("ari")).validate(data.n_genes)
    with pytest.raises(GridSpecError):
        small_spec(external_indices=(index_spec("dunn"),)).validate(data.n_genes)
    with pytest.raises(GridSpecError):
        small_spec(iterations=0).validate(data.n_genes)


def test_grid_spec_from_json_forms():
    spec = grid_spec_from_json(
        {
            "algorithms": ["kmeans", "fcm"],
            "k_min": 2,
            "k_max": 5,
            "iterations": 2,
            "internal_index": "db",
            "external_indices": ["ari"],
            "base_seed": 3,
        }
    )
    assert set(spec.algorithms) == {"kmeans", "fcm"}
    assert spec.internal_index.direction == "minimize"
    spec = grid_spec_from_json(
        {
            "algorithms": {"mocsvm": {"population_size": 10}},
            "k_min": 2,
            "k_max": 3,
            "iterations": 1,
            "internal_index": {"name": "i", "params": {"p": 3.0}},
        }
    )
    assert spec.internal_index.params == {"p": 3.0}
    for missing in ("k_min", "k_max", "iterations", "internal_index"):
        payload = {
            "algorithms": ["kmeans"], "k_min": 2, "k_max": 3,
            "iterations": 1, "internal_index": "db",
        }
        payload.pop(missing)
        with pytest.raises(GridSpecError) as exc:
            grid_spec_from_json(payload)
        assert exc.value.field == missing


def test_report_json_shape(blobs200):
    data, _ = blobs200
    result = run_grid(data, small_spec())
    payload = json.loads(report_json_text(result.report))
    assert "seconds" in payload["internal"]["kmeans"]
    stripped = json.loads(report_json_text(result.report, include_timings=False))
    assert "seconds" not in stripped["internal"]["kmeans"]
    assert "labels_file" not in stripped["internal"]["kmeans"]
    csv_text = result.report.to_csv()
    assert csv_text.startswith("kind,algorithm,index,value")
    assert "internal,kmeans,silhouette" in csv_text


def test_report_merge_overwrites():
    from exprclust.runner import InternalRow, ReportTable

    r1 = ReportTable(internal={"kmeans": InternalRow("kmeans", "db", 1.0, 2, 0.1)})
    r2 = ReportTable(internal={"kmeans": InternalRow("kmeans", "db", 0.5, 3, 0.2)})
    r1.merge(r2)
    assert r1.internal["kmeans"].value == 0.5
    assert r1.internal["kmeans"].k == 3
