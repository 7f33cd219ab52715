"""Cluster validity indices.

Three external indices compare a clustering against known true labels via
pair counting; six internal indices score a partition from geometry alone.
Internal indices always use Euclidean distance so values are comparable
across algorithms regardless of the metric used to build the clustering.

Degenerate configurations (coincident centers, zero total deviation, all
clusters singletons) raise DegeneratePartitionError rather than returning
sentinel numbers, so grid runners can exclude those cells explicitly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DegeneratePartitionError",
    "PairCounts",
    "IndexSpec",
    "INTERNAL_INDEX_DIRECTIONS",
    "EXTERNAL_INDEX_DIRECTIONS",
    "index_spec",
    "pair_counts",
    "minkowski_ext",
    "adjusted_rand",
    "percent_correct",
    "crisp_membership",
    "cluster_centers",
    "j_index",
    "db_index",
    "dunn_index",
    "xb_index",
    "i_index",
    "silhouette",
    "evaluate_internal",
    "evaluate_external",
]


class DegeneratePartitionError(ValueError):
    """The index is undefined for this partition (e.g. coincident centers)."""


# name -> direction ("maximize" / "minimize")
INTERNAL_INDEX_DIRECTIONS = {
    "j": "minimize",
    "db": "minimize",
    "dunn": "maximize",
    "xb": "minimize",
    "i": "maximize",
    "silhouette": "maximize",
}
EXTERNAL_INDEX_DIRECTIONS = {
    "minkowski": "minimize",
    "ari": "maximize",
    "percent": "maximize",
}


@dataclass(frozen=True)
class IndexSpec:
    """A validity index choice: canonical name, direction, kind, parameters."""

    name: str
    direction: str
    kind: str  # "internal" or "external"
    params: dict = field(default_factory=dict)


def index_spec(name: str, **params) -> IndexSpec:
    """Resolve a canonical lowercase index name into an IndexSpec."""
    name = name.strip().lower()
    if name in INTERNAL_INDEX_DIRECTIONS:
        return IndexSpec(name, INTERNAL_INDEX_DIRECTIONS[name], "internal", params)
    if name in EXTERNAL_INDEX_DIRECTIONS:
        return IndexSpec(name, EXTERNAL_INDEX_DIRECTIONS[name], "external", params)
    raise ValueError(f"unknown validity index {name!r}")


# ---------------------------------------------------------------------------
# external (pair-counting) indices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PairCounts:
    """Unordered-pair agreement counts between two labelings.

    a: same cluster in both; b: same in T only; c: same in C only;
    d: different in both.  a+b+c+d = n(n-1)/2.
    """

    a: int
    b: int
    c: int
    d: int

    @property
    def total(self) -> int:
        return self.a + self.b + self.c + self.d


def _as_labels(v) -> np.ndarray:
    arr = np.asarray(v)
    if arr.ndim != 1:
        raise ValueError("label vector must be 1-D")
    return arr


def pair_counts(t, c) -> PairCounts:
    """Count unordered point pairs by co-membership in T and in C.

    Computed from the joint and marginal contingency counts, O(n), which is
    equivalent to enumerating all n(n-1)/2 pairs.  Small inputs go through
    plain dict counting (lower constant), large ones through numpy.
    """
    t = _as_labels(t)
    c = _as_labels(c)
    if len(t) != len(c):
        raise ValueError(f"label vectors differ in length: {len(t)} vs {len(c)}")
    n = len(t)
    if n < 2:
        raise ValueError("need at least 2 objects")

    if n <= 512:
        joint: dict = {}
        rows: dict = {}
        cols: dict = {}
        for ti, ci in zip(t.tolist(), c.tolist()):
            key = (ti, ci)
            joint[key] = joint.get(key, 0) + 1
            rows[ti] = rows.get(ti, 0) + 1
            cols[ci] = cols.get(ci, 0) + 1
        a = sum(v * (v - 1) // 2 for v in joint.values())
        b = sum(v * (v - 1) // 2 for v in rows.values()) - a
        c_cnt = sum(v * (v - 1) // 2 for v in cols.values()) - a
    else:
        _, ti = np.unique(t, return_inverse=True)
        _, ci = np.unique(c, return_inverse=True)
        kc = int(ci.max()) + 1
        joint_counts = np.bincount(ti * kc + ci)

        def pairs2(x):
            return int(np.sum(x * (x - 1) // 2))

        a = pairs2(joint_counts)
        b = pairs2(np.bincount(ti)) - a
        c_cnt = pairs2(np.bincount(ci)) - a
    d = n * (n - 1) // 2 - a - b - c_cnt
    return PairCounts(a, b, c_cnt, d)


def minkowski_ext(t, c) -> float:
    """External Minkowski score sqrt((b+c)/(a+b)); 0 means identical partitions.

    Not symmetric in (T, C): b and c swap roles when the arguments swap.
    """
    pc = pair_counts(t, c)
    if pc.a + pc.b == 0:
        raise ValueError("Minkowski score undefined: T places every object alone")
    return float(np.sqrt((pc.b + pc.c) / (pc.a + pc.b)))


def adjusted_rand(t, c) -> float:
    """Adjusted Rand score 2(ad - bc) / ((a+b)(b+d) + (a+c)(c+d)).

    This simplified pair-count form equals 1 for identical partitions; it can
    go negative for strongly anti-correlated ones.
    """
    pc = pair_counts(t, c)
    denom = (pc.a + pc.b) * (pc.b + pc.d) + (pc.a + pc.c) * (pc.c + pc.d)
    if denom == 0:
        raise ValueError("adjusted Rand undefined: zero denominator")
    return float(2.0 * (pc.a * pc.d - pc.b * pc.c) / denom)


def percent_correct(t, c) -> float:
    """Percentage of point pairs classified consistently in both labelings."""
    pc = pair_counts(t, c)
    return float(100.0 * (pc.a + pc.d) / pc.total)


# ---------------------------------------------------------------------------
# internal (geometric) indices
# ---------------------------------------------------------------------------


def _check_partition(values: np.ndarray, labels) -> tuple[np.ndarray, int]:
    labels = np.asarray(labels, dtype=int)
    if labels.shape != (values.shape[0],):
        raise ValueError("labels length must equal number of data rows")
    k = int(labels.max(initial=0))
    present = np.unique(labels)
    if k < 2 or not np.array_equal(present, np.arange(1, k + 1)):
        raise ValueError("labels must cover exactly 1..K with K >= 2")
    return labels, k


def crisp_membership(labels, k: int | None = None) -> np.ndarray:
    """Lift hard labels (1..K) to a 0/1 membership matrix of shape (K, n)."""
    labels = np.asarray(labels, dtype=int)
    if k is None:
        k = int(labels.max())
    u = np.zeros((k, len(labels)))
    u[labels - 1, np.arange(len(labels))] = 1.0
    return u


def cluster_centers(values, labels, k: int | None = None) -> np.ndarray:
    """Mean of each cluster's member rows, shape (K, d)."""
    values = np.asarray(values, dtype=float)
    labels = np.asarray(labels, dtype=int)
    if k is None:
        k = int(labels.max())
    centers = np.empty((k, values.shape[1]))
    for j in range(1, k + 1):
        members = values[labels == j]
        if len(members) == 0:
            raise ValueError(f"cluster {j} is empty")
        centers[j - 1] = members.mean(axis=0)
    return centers


def _point_center_dists(values: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Squared euclidean distances, shape (K, n).

    Computed from explicit coordinate differences: the dot-product expansion
    loses precision near zero, which matters for indices that take square
    roots (a point coinciding with its center must give exactly 0).
    """
    diff = centers[:, None, :] - values[None, :, :]
    return np.sum(diff**2, axis=2)


def _min_center_sep2(centers: np.ndarray) -> float:
    k = centers.shape[0]
    diff = centers[:, None, :] - centers[None, :, :]
    d2 = np.sum(diff**2, axis=2)
    return float(d2[np.triu_indices(k, 1)].min())


def j_index(data, u, centers, m: float = 2.0) -> float:
    """Global fuzzy cluster variance: sum of u^m times squared distances."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    u = np.asarray(u, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if u.shape != (centers.shape[0], values.shape[0]):
        raise ValueError("membership matrix must be K x n matching centers and data")
    return float(np.sum(u**m * _point_center_dists(values, centers)))


def db_index(data, labels) -> float:
    """Davies-Bouldin: mean over clusters of the worst scatter/separation ratio.

    Scatter is the mean squared distance to the cluster center; separation is
    the squared distance between centers.
    """
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    labels, k = _check_partition(values, labels)
    centers = cluster_centers(values, labels, k)
    d2 = _point_center_dists(values, centers)
    scatter = np.array([d2[j - 1, labels == j].mean() for j in range(1, k + 1)])
    cdiff = centers[:, None, :] - centers[None, :, :]
    sep = np.sum(cdiff**2, axis=2)
    iu = np.triu_indices(k, 1)
    if np.any(sep[iu] == 0):
        raise DegeneratePartitionError("coincident cluster centers")
    ratios = (scatter[:, None] + scatter[None, :]) / np.where(sep > 0, sep, np.inf)
    np.fill_diagonal(ratios, -np.inf)
    return float(np.mean(ratios.max(axis=1)))


def dunn_index(data, labels) -> float:
    """Minimum between-cluster gap divided by maximum cluster diameter."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    labels, k = _check_partition(values, labels)
    diff = values[:, None, :] - values[None, :, :]
    dist = np.sqrt(np.maximum(np.sum(diff**2, axis=2), 0.0))
    same = labels[:, None] == labels[None, :]
    off_diag = ~np.eye(len(labels), dtype=bool)
    max_diam = dist[same & off_diag].max() if np.any(same & off_diag) else 0.0
    if max_diam == 0:
        raise DegeneratePartitionError("all clusters are singletons (zero diameter)")
    min_gap = dist[~same].min()
    return float(min_gap / max_diam)


def xb_index(data, u, centers) -> float:
    """Xie-Beni: total squared-membership variance over n times minimum center separation."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    u = np.asarray(u, dtype=float)
    centers = np.asarray(centers, dtype=float)
    if centers.shape[0] < 2:
        raise ValueError("XB needs at least 2 clusters")
    sigma = float(np.sum(u**2 * _point_center_dists(values, centers)))
    sep = _min_center_sep2(centers)
    if sep == 0:
        raise DegeneratePartitionError("coincident cluster centers")
    return sigma / (values.shape[0] * sep)


def i_index(data, u, centers, p: float = 2.0) -> float:
    """Separation-weighted compactness ratio raised to the contrast power p.

    Uses unsquared distances throughout; the one-cluster reference deviation
    is taken at the grand data mean with all memberships 1.
    """
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    u = np.asarray(u, dtype=float)
    centers = np.asarray(centers, dtype=float)
    k = centers.shape[0]
    if k < 2:
        raise ValueError("I index needs at least 2 clusters")
    dists = np.sqrt(_point_center_dists(values, centers))
    e_k = float(np.sum(u * dists))
    if e_k == 0:
        raise DegeneratePartitionError("zero total within-cluster deviation")
    grand = values.mean(axis=0, keepdims=True)
    e_1 = float(np.sum(np.sqrt(_point_center_dists(values, grand))))
    cdiff = centers[:, None, :] - centers[None, :, :]
    d_k = float(np.sqrt(np.sum(cdiff**2, axis=2)).max())
    return float(((1.0 / k) * (e_1 / e_k) * d_k) ** p)


def silhouette(data, labels) -> float:
    """Mean silhouette width over all points; singleton clusters score 0."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    labels, k = _check_partition(values, labels)
    n = len(labels)
    diff = values[:, None, :] - values[None, :, :]
    dist = np.sqrt(np.maximum(np.sum(diff**2, axis=2), 0.0))
    widths = np.zeros(n)
    sizes = np.array([np.sum(labels == j) for j in range(1, k + 1)])
    for i in range(n):
        own = labels[i]
        if sizes[own - 1] == 1:
            continue
        a_i = dist[i, labels == own].sum() / (sizes[own - 1] - 1)
        b_i = min(
            dist[i, labels == j].mean() for j in range(1, k + 1) if j != own
        )
        m = max(a_i, b_i)
        widths[i] = (b_i - a_i) / m if m > 0 else 0.0
    return float(widths.mean())


# ---------------------------------------------------------------------------
# dispatch helpers for the grid runner
# ---------------------------------------------------------------------------


def evaluate_internal(spec: IndexSpec, data, labels) -> float:
    """Evaluate an internal index on a hard partition.

    Membership-based indices (j, xb, i) see the crisp 0/1 lift of the labels
    with centers at the cluster means, so every algorithm is scored on the
    same footing.
    """
    if spec.kind != "internal":
        raise ValueError(f"{spec.name} is not an internal index")
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    labels, k = _check_partition(values, labels)
    if spec.name == "db":
        return db_index(values, labels)
    if spec.name == "dunn":
        return dunn_index(values, labels)
    if spec.name == "silhouette":
        return silhouette(values, labels)
    u = crisp_membership(labels, k)
    centers = cluster_centers(values, labels, k)
    if spec.name == "j":
        return j_index(values, u, centers, m=spec.params.get("m", 2.0))
    if spec.name == "xb":
        return xb_index(values, u, centers)
    if spec.name == "i":
        return i_index(values, u, centers, p=spec.params.get("p", 2.0))
    raise ValueError(f"unknown internal index {spec.name!r}")


def evaluate_external(spec: IndexSpec, t, c) -> float:
    if spec.kind != "external":
        raise ValueError(f"{spec.name} is not an external index")
    if spec.name == "minkowski":
        return minkowski_ext(t, c)
    if spec.name == "ari":
        return adjusted_rand(t, c)
    if spec.name == "percent":
        return percent_correct(t, c)
    raise ValueError(f"unknown external index {spec.name!r}")
