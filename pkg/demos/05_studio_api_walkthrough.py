"""The HTTP studio API, end to end, without leaving the process.

Uses the in-process test client to upload a dataset, submit a grid run, poll
it, fetch label vectors, pull rendered SVGs and exercise the session
accumulation + refresh semantics -- exactly what the browser studio does over
the wire.
"""

import json
import time

import numpy as np
from fastapi.testclient import TestClient

from exprclust.server import create_app

rng = np.random.default_rng(9)
centers = 8.0 * np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
rows = []
for c, lab in zip(centers, [1, 2, 3, 4]):
    for p in rng.normal(c, 1.0, (15, 2)):
        rows.append(f"{p[0]:.6f},{p[1]:.6f},{lab}")
csv_text = "\n".join(rows) + "\n"

app = create_app()
with TestClient(app) as client:
    ds = client.post(
        "/datasets",
        files={"file": ("blobs.csv", csv_text)},
        data={"class_column": 3},
    ).json()
    print(f"uploaded dataset {ds['id']}: {ds['rows']} x {ds['cols']}, "
          f"labels: {ds['has_true_labels']}")

    payload = {
        "dataset_id": ds["id"],
        "algorithms": {"kmeans": {}, "hier": {"metric": "euclidean", "linkage": "average"}},
        "k_min": 2,
        "k_max": 6,
        "iterations": 2,
        "internal_index": "silhouette",
        "external_indices": ["ari", "percent"],
        "base_seed": 1,
    }
    run_id = client.post("/runs", json=payload).json()["id"]
    print(f"submitted run {run_id}; polling ...")
    while True:
        body = client.get(f"/runs/{run_id}").json()
        if body["status"] in ("done", "failed"):
            break
        time.sleep(0.05)
    print(f"run finished: {body['status']}")

    report = body["report"]
    for alg, row in report["internal"].items():
        print(f"  {alg:<8} best silhouette {row['value']:.4f} at k={row['clusters']} "
              f"({row['seconds']:.2f}s)")
    for alg, rows_ext in report.get("external", {}).items():
        print(f"  {alg:<8} ARI {rows_ext['ari']['value']:.3f}  "
              f"percent {rows_ext['percent']['value']:.1f}")

    labels = client.get(f"/runs/{run_id}/labels/kmeans").json()["labels"]
    print(f"\nkmeans label vector, first 12 of {len(labels)}: {labels[:12]}")

    svg = client.get(f"/runs/{run_id}/render",
                     params={"kind": "heatmap", "algorithm": "kmeans"}).text
    print(f"heatmap SVG: {len(svg)} bytes, starts {svg[:30]!r}")

    curves = client.get("/curves").json()["curves"]
    print(f"\naccumulated curves: {[c['algorithm'] for c in curves]}")
    cleared = client.post("/session/refresh").json()["curves_cleared"]
    print(f"refresh cleared {cleared} curves; "
          f"now {len(client.get('/curves').json()['curves'])} remain")
    print("\naccumulated report still available:",
          list(json.loads(client.get('/report').text)['internal']))
