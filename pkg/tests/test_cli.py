import json
import os

import numpy as np
import pytest

from exprclust.cli import main

from conftest import make_blobs


@pytest.fixture
def blob_csv_path(tmp_path):
    pts, truth = make_blobs(n_per=12, separation=8.0, seed=7)
    lines = [
        ",".join([repr(float(v)) for v in row] + [str(lab)])
        for row, lab in zip(pts, truth)
    ]
    path = tmp_path / "blobs.csv"
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def grid_config_path(tmp_path):
    cfg = {
        "algorithms": {
            "kmeans": {},
            "hier": {"metric": "euclidean", "linkage": "average"},
        },
        "k_min": 2,
        "k_max": 4,
        "iterations": 2,
        "internal_index": "silhouette",
        "external_indices": ["ari", "minkowski", "percent"],
        "base_seed": 17,
    }
    path = tmp_path / "grid.json"
    path.write_text(json.dumps(cfg))
    return str(path)


def test_preprocess_writes_csv(blob_csv_path, tmp_path, capsys):
    out = tmp_path / "prep.csv"
    code = main([
        "preprocess", "--data", blob_csv_path, "--class-column", "3",
        "--top-n", "20", "--normalize", "--out", str(out),
    ])
    assert code == 0
    assert "20x2" in capsys.readouterr().out
    assert out.exists()


def test_run_produces_artifacts(blob_csv_path, grid_config_path, tmp_path):
    out = tmp_path / "results"
    code = main([
        "run", "--data", blob_csv_path, "--class-column", "3",
        "--config", grid_config_path, "--out", str(out),
    ])
    assert code == 0
    report = json.loads((out / "report.json").read_text())
    assert set(report["internal"]) == {"kmeans", "hier"}
    for alg in ("kmeans", "hier"):
        assert report["internal"][alg]["clusters"] == 4
        assert report["external"][alg]["ari"]["value"] == 1.0
        assert (out / f"heatmap_{alg}.svg").exists()
        assert (out / f"profile_{alg}.svg").exists()
    assert (out / "report.csv").exists()
    assert (out / "curves.json").exists()
    assert (out / "index_curves.svg").exists()
    assert (out / "preprocessed.csv").exists()
    label_files = [p for p in os.listdir(out) if p.endswith(".labels")]
    assert len(label_files) == 2


def test_run_twice_no_timings_byte_identical(blob_csv_path, grid_config_path, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = tmp_path / name
        code = main([
            "run", "--data", blob_csv_path, "--class-column", "3",
            "--config", grid_config_path, "--out", str(out), "--no-timings",
        ])
        assert code == 0
        outs.append((out / "report.json").read_bytes())
    assert outs[0] == outs[1]


def test_report_and_render_from_results(blob_csv_path, grid_config_path, tmp_path, capsys):
    out = tmp_path / "results"
    main([
        "run", "--data", blob_csv_path, "--class-column", "3",
        "--config", grid_config_path, "--out", str(out),
    ])
    capsys.readouterr()

    assert main(["report", "--run", str(out)]) == 0
    body = json.loads(capsys.readouterr().out)
    assert "internal" in body

    assert main(["report", "--run", str(out), "--format", "csv"]) == 0
    assert capsys.readouterr().out.startswith("kind,algorithm")

    for kind in ("heatmap", "profile"):
        assert main(["render", "--kind", kind, "--run", str(out),
                     "--algorithm", "kmeans"]) == 0
        svg = capsys.readouterr().out
        assert svg.startswith("<svg")
    assert main(["render", "--kind", "index_curve", "--run", str(out)]) == 0
    assert capsys.readouterr().out.startswith("<svg")


def test_render_unknown_algorithm_fails(blob_csv_path, grid_config_path, tmp_path, capsys):
    out = tmp_path / "results"
    main([
        "run", "--data", blob_csv_path, "--class-column", "3",
        "--config", grid_config_path, "--out", str(out),
    ])
    capsys.readouterr()
    code = main(["render", "--kind", "heatmap", "--run", str(out), "--algorithm", "fcm"])
    assert code == 1
    assert "fcm" in capsys.readouterr().err


def test_invalid_config_nonzero_exit(blob_csv_path, tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"algorithms": ["kmeans"], "k_min": 2}))
    code = main([
        "run", "--data", blob_csv_path, "--config", str(bad),
        "--out", str(tmp_path / "x"),
    ])
    assert code == 1
    assert "k_max" in capsys.readouterr().err


def test_missing_data_file(grid_config_path, tmp_path, capsys):
    code = main([
        "run", "--data", "/no/such.csv", "--config", grid_config_path,
        "--out", str(tmp_path / "x"),
    ])
    assert code == 1
    assert "error" in capsys.readouterr().err
