"""K-means and fuzzy C-means clustering.

Both minimize squared-Euclidean objectives: Lloyd iterations for K-means,
alternating center/membership updates for FCM.  Runs are deterministic for a
fixed seed; initial centers are K distinct data points drawn without
replacement.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "Partition",
    "MembershipMatrix",
    "RunConfig",
    "KMeansResult",
    "FcmResult",
    "kmeans_run",
    "kmeans_objective",
    "fcm_run",
    "relabel_first_appearance",
]


@dataclass(frozen=True)
class Partition:
    """Hard clustering: one label in 1..k per object, optional cluster centers."""

    labels: np.ndarray
    k: int
    centers: np.ndarray | None = None

    def __post_init__(self):
        labels = np.asarray(self.labels, dtype=int)
        present = np.unique(labels)
        if self.k < 1 or not np.array_equal(present, np.arange(1, self.k + 1)):
            raise ValueError(f"labels must cover exactly 1..{self.k} with no empty cluster")
        labels.setflags(write=False)
        object.__setattr__(self, "labels", labels)
        if self.centers is not None:
            centers = np.asarray(self.centers, dtype=float)
            if centers.shape[0] != self.k:
                raise ValueError("centers row count must equal k")
            centers.setflags(write=False)
            object.__setattr__(self, "centers", centers)

    @property
    def n(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class MembershipMatrix:
    """Fuzzy memberships, shape (K, n); every column sums to 1."""

    u: np.ndarray
    fuzzifier: float

    def __post_init__(self):
        u = np.asarray(self.u, dtype=float)
        if u.ndim != 2:
            raise ValueError("membership matrix must be 2-D (K x n)")
        if u.min() < -1e-12 or u.max() > 1 + 1e-12:
            raise ValueError("memberships must lie in [0, 1]")
        colsums = u.sum(axis=0)
        if np.any(np.abs(colsums - 1.0) > 1e-9):
            raise ValueError("membership columns must sum to 1")
        if self.fuzzifier <= 1:
            raise ValueError("fuzzifier must be > 1")
        u.setflags(write=False)
        object.__setattr__(self, "u", u)

    @property
    def k(self) -> int:
        return self.u.shape[0]


@dataclass(frozen=True)
class RunConfig:
    """Iteration controls shared by the partitional algorithms."""

    k: int
    max_iters: int = 100
    tol: float = 1e-6
    seed: int = 0
    fuzzifier: float = 2.0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if self.tol < 0:
            raise ValueError("tol must be nonnegative")
        if self.fuzzifier <= 1:
            raise ValueError("fuzzifier must be > 1")


@dataclass(frozen=True)
class KMeansResult:
    partition: Partition
    objective: float
    iterations: int
    objective_history: tuple[float, ...]


@dataclass(frozen=True)
class FcmResult:
    membership: MembershipMatrix
    partition: Partition
    objective: float
    iterations: int
    objective_history: tuple[float, ...]


def _values(data) -> np.ndarray:
    return data.values if hasattr(data, "values") else np.asarray(data, dtype=float)


def relabel_first_appearance(labels: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Renumber labels to 1..K in order of first appearance.

    Returns (new_labels, order) where order[new - 1] is the old label.
    """
    labels = np.asarray(labels, dtype=int)
    order: list[int] = []
    mapping: dict[int, int] = {}
    out = np.empty_like(labels)
    for i, lab in enumerate(labels):
        if lab not in mapping:
            mapping[lab] = len(order) + 1
            order.append(int(lab))
        out[i] = mapping[lab]
    return out, order


def _init_indices(n: int, k: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.choice(n, size=k, replace=False)


def _sq_dists(values: np.ndarray, centers: np.ndarray) -> np.ndarray:
    """Squared euclidean point-to-center distances, shape (K, n)."""
    d2 = (
        np.sum(centers**2, axis=1)[:, None]
        + np.sum(values**2, axis=1)[None, :]
        - 2.0 * centers @ values.T
    )
    return np.maximum(d2, 0.0)


def kmeans_run(data, cfg: RunConfig, init_indices=None) -> KMeansResult:
    """Lloyd's algorithm from a seeded distinct-point initialization.

    The objective (total squared distance to assigned centers) is recorded
    after every iteration and is non-increasing.  Terminates when the
    assignment stops changing, the maximum center shift drops below tol, or
    max_iters is reached.  Empty clusters are repaired by turning the point
    farthest from its center into a singleton.
    """
    values = _values(data)
    n = values.shape[0]
    if cfg.k > n:
        raise ValueError(f"k={cfg.k} exceeds number of objects n={n}")
    if init_indices is None:
        init_indices = _init_indices(n, cfg.k, cfg.seed)
    centers = values[np.asarray(init_indices)].astype(float).copy()

    labels0 = np.zeros(n, dtype=int)
    prev = None
    history: list[float] = []
    iterations = 0
    for _ in range(cfg.max_iters):
        iterations += 1
        d2 = _sq_dists(values, centers)
        labels0 = np.argmin(d2, axis=0)  # ties to lowest index

        counts = np.bincount(labels0, minlength=cfg.k)
        for j in np.where(counts == 0)[0]:
            # farthest point from its current center becomes the singleton,
            # skipping points that are already alone in their cluster
            point_d2 = d2[labels0, np.arange(n)].copy()
            point_d2[counts[labels0] <= 1] = -np.inf
            p = int(np.argmax(point_d2))
            counts[labels0[p]] -= 1
            labels0[p] = j
            counts[j] = 1
            centers[j] = values[p]
            d2[j] = _sq_dists(values, centers[j : j + 1])[0]

        new_centers = np.empty_like(centers)
        for j in range(cfg.k):
            new_centers[j] = values[labels0 == j].mean(axis=0)
        shift = float(np.sqrt(np.sum((new_centers - centers) ** 2, axis=1)).max())
        centers = new_centers
        history.append(float(np.sum(_sq_dists(values, centers)[labels0, np.arange(n)])))
        if prev is not None and np.array_equal(labels0, prev):
            break
        if shift < cfg.tol:
            break
        prev = labels0.copy()

    new_labels, order = relabel_first_appearance(labels0 + 1)
    centers = centers[[o - 1 for o in order]]
    partition = Partition(new_labels, cfg.k, centers)
    return KMeansResult(partition, history[-1], iterations, tuple(history))


def kmeans_objective(data, partition: Partition) -> float:
    """Total squared euclidean distance of points to their cluster centers.

    Uses the stored centers when present, otherwise the cluster means.
    """
    values = _values(data)
    labels = np.asarray(partition.labels, dtype=int)
    if labels.min() < 1 or labels.max() > partition.k:
        raise ValueError("labels out of range 1..k")
    centers = partition.centers
    if centers is None:
        centers = np.array(
            [values[labels == j].mean(axis=0) for j in range(1, partition.k + 1)]
        )
    d2 = _sq_dists(values, centers)
    return float(np.sum(d2[labels - 1, np.arange(len(labels))]))


def _fcm_memberships(values: np.ndarray, centers: np.ndarray, m: float) -> np.ndarray:
    """One membership half-step at fixed centers.

    A point coinciding with a center gets full membership in the first such
    center.
    """
    d2 = _sq_dists(values, centers)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        inv = d2 ** (-1.0 / (m - 1.0))
        u = inv / inv.sum(axis=0, keepdims=True)
    bad = ~np.all(np.isfinite(u), axis=0)
    if bad.any():
        for col in np.where(bad)[0]:
            u[:, col] = 0.0
            u[int(np.argmin(d2[:, col])), col] = 1.0
    return u


def fcm_run(data, cfg: RunConfig, init_indices=None) -> FcmResult:
    """Alternating optimization of the fuzzy objective J_m.

    Each iteration updates centers from the current memberships and then the
    memberships from the new centers; J_m evaluated at the end of every
    iteration is non-increasing.  The hard partition is the per-column argmax
    (ties to the lowest index).
    """
    values = _values(data)
    n = values.shape[0]
    m = cfg.fuzzifier
    if cfg.k > n:
        raise ValueError(f"k={cfg.k} exceeds number of objects n={n}")
    if init_indices is None:
        init_indices = _init_indices(n, cfg.k, cfg.seed)
    centers = values[np.asarray(init_indices)].astype(float).copy()
    u = _fcm_memberships(values, centers, m)

    history: list[float] = []
    iterations = 0
    for _ in range(cfg.max_iters):
        iterations += 1
        um = u**m
        new_centers = (um @ values) / um.sum(axis=1, keepdims=True)
        u = _fcm_memberships(values, new_centers, m)
        shift = float(np.sqrt(np.sum((new_centers - centers) ** 2, axis=1)).max())
        centers = new_centers
        history.append(float(np.sum(u**m * _sq_dists(values, centers))))
        if shift < cfg.tol:
            break

    hard = np.argmax(u, axis=0) + 1
    new_labels, order = relabel_first_appearance(hard)
    perm = [o - 1 for o in order]
    # clusters that won no argmax keep their membership rows at the tail
    rest = [j for j in range(cfg.k) if j not in perm]
    u = u[perm + rest]
    centers = centers[perm + rest]
    k_hard = len(perm)
    partition = Partition(new_labels, k_hard, centers[:k_hard])
    membership = MembershipMatrix(u, m)
    return FcmResult(membership, partition, history[-1], iterations, tuple(history))
