"""The grid runner: algorithms x cluster range x iterations.

Sweeps k in [2, 7] with two seeded iterations per algorithm, keeps the best
Silhouette per algorithm, and renders the report table, the index-vs-k
curves, and a cluster heatmap into ./grid_demo_output/.
"""

import os

import numpy as np

from exprclust import ExpressionMatrix, run_grid
from exprclust.render import render_heatmap, render_index_curves, render_profile
from exprclust.runner import GridSpec, report_json_text
from exprclust.validity import index_spec

rng = np.random.default_rng(5)
centers = 8.0 * np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
pts = np.vstack([rng.normal(c, 1.0, (30, 2)) for c in centers])
truth = np.repeat([1, 2, 3, 4], 30)
data = ExpressionMatrix(
    pts, [f"g{i + 1}" for i in range(len(pts))], ["c1", "c2"], truth
)

out = "grid_demo_output"
spec = GridSpec(
    algorithms={
        "kmeans": {},
        "fcm": {},
        "hier": {"metric": "euclidean", "linkage": "average"},
        "mocsvm": {"population_size": 24, "generations": 30},
    },
    k_min=2,
    k_max=7,
    iterations=2,
    internal_index=index_spec("silhouette"),
    external_indices=(index_spec("ari"), index_spec("percent")),
    base_seed=42,
    output_dir=out,
)

result = run_grid(data, spec)

print("report (timings included):")
print(report_json_text(result.report))

print("index-vs-k curves:")
for curve in result.curves:
    pts_str = ", ".join(
        f"k={k}:{v:.3f}" if v is not None else f"k={k}:excluded"
        for k, v in curve.points
    )
    print(f"  {curve.algorithm:<8} {pts_str}")

with open(os.path.join(out, "curves.svg"), "w") as fh:
    fh.write(render_index_curves(result.curves))
for alg, labels in result.best_labels.items():
    with open(os.path.join(out, f"heatmap_{alg}.svg"), "w") as fh:
        fh.write(render_heatmap(data, labels))
    with open(os.path.join(out, f"profile_{alg}.svg"), "w") as fh:
        fh.write(render_profile(data, labels))
print(f"\nSVGs and label files written to {out}/")
print(sorted(os.listdir(out))[:8])
