import json
import time

import numpy as np
import pytest
from fastapi.testclient import TestClient

from exprclust.server import create_app

from conftest import make_blobs


@pytest.fixture
def client(tmp_path):
    app = create_app(output_dir=str(tmp_path))
    with TestClient(app) as c:
        yield c


def upload(client, text, **form):
    return client.post(
        "/datasets", files={"file": ("data.csv", text)}, data=form
    )


def blob_csv(n_per=12, labeled=True):
    pts, truth = make_blobs(n_per=n_per, separation=8.0, seed=7)
    lines = []
    for row, lab in zip(pts, truth):
        cells = [repr(float(v)) for v in row]
        if labeled:
            cells.append(str(lab))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def small_run_payload(ds_id, **overrides):
    payload = {
        "dataset_id": ds_id,
        "algorithms": {"kmeans": {}, "hier": {"metric": "euclidean", "linkage": "average"}},
        "k_min": 2,
        "k_max": 4,
        "iterations": 1,
        "internal_index": "silhouette",
        "base_seed": 11,
    }
    payload.update(overrides)
    return payload


def wait_done(client, run_id, timeout=30.0):
    deadline = time.time() + timeout
    while time.time() < deadline:
        body = client.get(f"/runs/{run_id}").json()
        if body["status"] in ("done", "failed"):
            return body
        time.sleep(0.05)
    raise TimeoutError(f"run {run_id} did not finish")


def test_upload_dims_with_class_column(client):
    resp = upload(client, "1,2,A\n3,4,A\n5,6,B\n7,8,B\n", class_column=3)
    assert resp.status_code == 200
    body = resp.json()
    assert body["rows"] == 4
    assert body["cols"] == 2
    assert body["has_true_labels"] is True


def test_upload_preprocess_options(client):
    resp = upload(client, blob_csv(), class_column=3, top_n=10, normalize=False)
    assert resp.status_code == 200
    assert resp.json()["rows"] == 10


def test_upload_invalid_matrix(client):
    resp = upload(client, "1,2\n3,NA\n")
    assert resp.status_code == 400
    assert "row 2" in resp.json()["detail"]


def test_run_validation_field_errors(client):
    ds = upload(client, blob_csv(), class_column=3).json()["id"]
    resp = client.post("/runs", json=small_run_payload(ds, k_max=5000))
    assert resp.status_code == 400
    errors = resp.json()["detail"]["errors"]
    assert errors[0]["field"] == "k_max"
    assert "k_max" in errors[0]["message"]


def test_unknown_ids_404(client):
    assert client.get("/datasets/ds-99").status_code == 404
    assert client.get("/runs/run-99").status_code == 404
    resp = client.post("/runs", json=small_run_payload("ds-99"))
    assert resp.status_code == 404


def test_external_without_labels_409(client):
    ds = upload(client, blob_csv(labeled=False)).json()["id"]
    payload = small_run_payload(ds, external_indices=["ari"])
    resp = client.post("/runs", json=payload)
    assert resp.status_code == 409


def test_full_run_report_labels_and_render(client):
    ds = upload(client, blob_csv(), class_column=3).json()["id"]
    payload = small_run_payload(ds, external_indices=["ari", "minkowski", "percent"])
    run_id = client.post("/runs", json=payload).json()["id"]
    body = wait_done(client, run_id)
    assert body["status"] == "done"
    assert set(body["report"]["internal"]) == {"kmeans", "hier"}
    assert body["report"]["external"]["kmeans"]["ari"]["value"] == 1.0

    labels = client.get(f"/runs/{run_id}/labels/kmeans").json()["labels"]
    assert len(labels) == 48
    assert client.get(f"/runs/{run_id}/labels/fcm").status_code == 404

    for kind in ("heatmap", "profile"):
        resp = client.get(f"/runs/{run_id}/render", params={"kind": kind, "algorithm": "kmeans"})
        assert resp.status_code == 200
        assert resp.headers["content-type"].startswith("image/svg+xml")
        assert resp.text.startswith("<svg")
    resp = client.get(f"/runs/{run_id}/render", params={"kind": "index_curve"})
    assert resp.status_code == 200
    resp = client.get(f"/runs/{run_id}/render", params={"kind": "sparkline"})
    assert resp.status_code == 400


def test_curve_accumulation_and_refresh(client):
    ds = upload(client, blob_csv(), class_column=3).json()["id"]
    r1 = client.post("/runs", json=small_run_payload(ds, algorithms={"kmeans": {}})).json()["id"]
    wait_done(client, r1)
    r2 = client.post(
        "/runs",
        json=small_run_payload(ds, algorithms={"hier": {"metric": "euclidean", "linkage": "average"}}),
    ).json()["id"]
    wait_done(client, r2)

    curves = client.get("/curves").json()["curves"]
    assert {c["algorithm"] for c in curves} == {"kmeans", "hier"}
    svg = client.get("/curves/render")
    assert svg.status_code == 200

    report = client.get("/report").json()
    assert set(report["internal"]) == {"kmeans", "hier"}

    assert client.post("/session/refresh").json()["curves_cleared"] == 2
    assert client.get("/curves").json()["curves"] == []
    assert client.get("/curves/render").status_code == 404
    # the report survives a refresh; only the plot accumulation clears
    assert set(client.get("/report").json()["internal"]) == {"kmeans", "hier"}


def test_report_canonical_serialization(client):
    ds = upload(client, blob_csv(), class_column=3).json()["id"]
    run_id = client.post("/runs", json=small_run_payload(ds)).json()["id"]
    wait_done(client, run_id)
    text = client.get("/report", params={"timings": "false"}).text
    payload = json.loads(text)
    assert "seconds" not in payload["internal"]["kmeans"]
    assert text == json.dumps(payload, sort_keys=True, indent=2) + "\n"


def test_queued_runs_execute_in_order(client):
    ds = upload(client, blob_csv(), class_column=3).json()["id"]
    ids = [
        client.post("/runs", json=small_run_payload(ds, base_seed=seed)).json()["id"]
        for seed in (1, 2, 3)
    ]
    for run_id in ids:
        assert wait_done(client, run_id)["status"] == "done"
