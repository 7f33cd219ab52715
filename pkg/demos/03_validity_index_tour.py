"""All nine validity indices on one partition.

Internal indices score the geometry of a K-means partition across a range of
cluster counts; external indices compare the k=3 partition against the known
labels.  Watch how each index points to the true k=3.
"""

import numpy as np

from exprclust import (
    RunConfig,
    adjusted_rand,
    db_index,
    dunn_index,
    i_index,
    j_index,
    kmeans_run,
    minkowski_ext,
    pair_counts,
    percent_correct,
    silhouette,
    xb_index,
)
from exprclust.validity import cluster_centers, crisp_membership

rng = np.random.default_rng(3)
X = np.vstack([
    rng.normal([0, 0], 0.8, (30, 2)),
    rng.normal([7, 1], 0.8, (30, 2)),
    rng.normal([3, 6], 0.8, (30, 2)),
])
truth = np.repeat([1, 2, 3], 30)

print("internal indices over k (J, DB, XB to minimize; Dunn, I, Silhouette to maximize)")
print(f"{'k':>2}  {'J':>9}  {'DB':>7}  {'Dunn':>6}  {'XB':>7}  {'I':>9}  {'Sil':>6}")
for k in range(2, 7):
    part = kmeans_run(X, RunConfig(k=k, seed=11)).partition
    labels = part.labels
    u = crisp_membership(labels)
    c = cluster_centers(X, labels)
    print(
        f"{k:>2}  {j_index(X, u, c):>9.2f}  {db_index(X, labels):>7.3f}  "
        f"{dunn_index(X, labels):>6.3f}  {xb_index(X, u, c):>7.4f}  "
        f"{i_index(X, u, c):>9.1f}  {silhouette(X, labels):>6.3f}"
    )

labels3 = kmeans_run(X, RunConfig(k=3, seed=11)).partition.labels
pc = pair_counts(truth, labels3)
print(f"\npair counts vs truth at k=3: a={pc.a} b={pc.b} c={pc.c} d={pc.d}")
print(f"adjusted Rand:     {adjusted_rand(truth, labels3):.4f}   (1 = identical)")
print(f"Minkowski score:   {minkowski_ext(truth, labels3):.4f}   (0 = identical)")
print(f"pairs correct:     {percent_correct(truth, labels3):.2f}%")
