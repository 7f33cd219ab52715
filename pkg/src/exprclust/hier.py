"""Agglomerative hierarchical clustering over a precomputed distance matrix.

Seven linkage methods are supported through the Lance-Williams recurrence:
single, complete, average, weighted, centroid, median and ward.  The last
three are geometric: they operate on squared Euclidean distances internally,
report square-rooted merge heights, and are only valid when the input matrix
holds Euclidean distances (signalled by the caller via euclidean=True).

Cluster ids follow the usual convention: leaves are 0..n-1 and the t-th merge
creates id n+t.  Equal-dissimilarity ties break toward the smallest (a, b)
id pair, so trees are reproducible across platforms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partitional import Partition

LINKAGE_METHODS = ("single", "complete", "average", "weighted", "centroid", "median", "ward")
GEOMETRIC_METHODS = frozenset({"centroid", "median", "ward"})

__all__ = ["Dendrogram", "LINKAGE_METHODS", "GEOMETRIC_METHODS", "linkage_build", "cut_tree"]


@dataclass(frozen=True)
class Dendrogram:
    """Merge tree: (cluster_a, cluster_b, height) for each of the n-1 merges."""

    merges: tuple[tuple[int, int, float], ...]
    leaf_count: int

    def to_json(self) -> dict:
        return {
            "leaf_count": self.leaf_count,
            "merges": [[a, b, h] for a, b, h in self.merges],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Dendrogram":
        return cls(
            tuple((int(a), int(b), float(h)) for a, b, h in obj["merges"]),
            int(obj["leaf_count"]),
        )


def _check_distance_matrix(dist) -> np.ndarray:
    d = np.asarray(dist, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValueError("distance matrix must be square")
    if np.isnan(d).any():
        raise ValueError("distance matrix contains NaN")
    if not np.allclose(d, d.T, rtol=0.0, atol=1e-12):
        raise ValueError("distance matrix must be symmetric")
    if np.any(np.abs(np.diag(d)) > 1e-12):
        raise ValueError("distance matrix must have a zero diagonal")
    return d


def linkage_build(dist, method: str, euclidean: bool = False) -> Dendrogram:
    """Agglomerate by repeatedly merging the closest cluster pair.

    Cross-cluster dissimilarities are maintained with the Lance-Williams
    update for the chosen method.  Geometric methods (centroid, median,
    ward) require euclidean=True.
    """
    if method not in LINKAGE_METHODS:
        raise ValueError(f"unknown linkage method {method!r}")
    geometric = method in GEOMETRIC_METHODS
    if geometric and not euclidean:
        raise ValueError(f"{method} linkage requires the euclidean metric")
    d = _check_distance_matrix(dist).copy()
    n = d.shape[0]
    if n < 2:
        raise ValueError("need at least 2 objects")
    if geometric:
        d = d**2

    active = np.ones(n, dtype=bool)
    slot_id = np.arange(n)  # cluster id currently held by each slot
    sizes = np.ones(n, dtype=int)
    np.fill_diagonal(d, np.inf)

    merges: list[tuple[int, int, float]] = []
    for t in range(n - 1):
        sub = np.where(active)[0]
        block = d[np.ix_(sub, sub)]
        dmin = block.min()
        # ties resolved toward the smallest (id_a, id_b) pair
        cand = np.argwhere(block == dmin)
        best = None
        for i, j in cand:
            if i >= j:
                continue
            pair = tuple(sorted((int(slot_id[sub[i]]), int(slot_id[sub[j]]))))
            if best is None or pair < best[0]:
                best = (pair, (sub[i], sub[j]))
        (id_a, id_b), (sa, sb) = best
        height = float(np.sqrt(dmin)) if geometric else float(dmin)
        merges.append((id_a, id_b, height))

        na, nb = sizes[sa], sizes[sb]
        others = sub[(sub != sa) & (sub != sb)]
        if len(others) > 0:
            dat = d[sa, others]
            dbt = d[sb, others]
            dab = dmin
            if method == "single":
                new = np.minimum(dat, dbt)
            elif method == "complete":
                new = np.maximum(dat, dbt)
            elif method == "average":
                new = (na * dat + nb * dbt) / (na + nb)
            elif method == "weighted":
                new = 0.5 * (dat + dbt)
            elif method == "centroid":
                s = na + nb
                new = (na * dat + nb * dbt) / s - (na * nb * dab) / s**2
            elif method == "median":
                new = 0.5 * dat + 0.5 * dbt - 0.25 * dab
            else:  # ward
                nt = sizes[others]
                tot = na + nb + nt
                new = ((na + nt) * dat + (nb + nt) * dbt - nt * dab) / tot
            d[sa, others] = new
            d[others, sa] = new

        sizes[sa] = na + nb
        active[sb] = False
        slot_id[sa] = n + t
        d[sb, :] = np.inf
        d[:, sb] = np.inf

    return Dendrogram(tuple(merges), n)


def cut_tree(dendrogram: Dendrogram, k: int) -> Partition:
    """Partition into k clusters by undoing the last k-1 merges.

    Labels are 1..k in order of first appearance over the leaves.
    """
    n = dendrogram.leaf_count
    if not (1 <= k <= n):
        raise ValueError(f"k must be in [1, {n}], got {k}")
    parent = list(range(2 * n - 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for t, (a, b, _h) in enumerate(dendrogram.merges[: n - k]):
        new_id = n + t
        parent[find(a)] = new_id
        parent[find(b)] = new_id

    roots = [find(i) for i in range(n)]
    labels = np.empty(n, dtype=int)
    mapping: dict[int, int] = {}
    for i, r in enumerate(roots):
        if r not in mapping:
            mapping[r] = len(mapping) + 1
        labels[i] = mapping[r]
    return Partition(labels, k)
