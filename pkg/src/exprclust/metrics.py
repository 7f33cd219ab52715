"""Pairwise distance functions used by clustering and validity indices.

Supported kinds: euclidean, sqeuclidean, seuclidean, cityblock, mahalanobis,
minkowski (with exponent, e.g. "minkowski:3"), cosine, correlation, spearman,
hamming, jaccard, chebychev.

Seuclidean and mahalanobis need dataset-level context (per-dimension standard
deviations, regularized inverse covariance); prepare_metric builds it.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

METRIC_KINDS = (
    "euclidean",
    "sqeuclidean",
    "seuclidean",
    "cityblock",
    "mahalanobis",
    "minkowski",
    "cosine",
    "correlation",
    "spearman",
    "hamming",
    "jaccard",
    "chebychev",
)

__all__ = [
    "Metric",
    "METRIC_KINDS",
    "parse_metric",
    "prepare_metric",
    "distance",
    "pairwise",
]


@dataclass(frozen=True)
class Metric:
    """A distance kind plus any dataset context it needs."""

    kind: str
    p: float | None = None
    dim_std: np.ndarray | None = None  # seuclidean context
    inv_cov: np.ndarray | None = None  # mahalanobis context

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ValueError(f"unknown metric kind {self.kind!r}")
        if self.kind == "minkowski":
            if self.p is None or not np.isfinite(self.p) or self.p <= 0:
                raise ValueError("minkowski exponent must be finite and positive")

    @property
    def name(self) -> str:
        if self.kind == "minkowski":
            return f"minkowski:{self.p:g}"
        return self.kind


def parse_metric(name: str) -> Metric:
    """Build a Metric from its config-string name, e.g. "euclidean" or "minkowski:3"."""
    name = name.strip().lower()
    if name.startswith("minkowski:"):
        return Metric("minkowski", p=float(name.split(":", 1)[1]))
    if name == "minkowski":
        return Metric("minkowski", p=2.0)
    return Metric(name)


def prepare_metric(metric: Metric, data) -> Metric:
    """Fill in dataset-level context for kinds that need it.

    The mahalanobis covariance is regularized as cov + eps*I with
    eps = 1e-6 * trace(cov)/d, since expression matrices are often
    rank-deficient.
    """
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    if metric.kind == "seuclidean" and metric.dim_std is None:
        std = values.std(axis=0, ddof=1)
        if np.any(std == 0):
            j = int(np.argmax(std == 0))
            raise ValueError(
                f"seuclidean undefined: column {j + 1} is constant across the dataset"
            )
        return replace(metric, dim_std=std)
    if metric.kind == "mahalanobis" and metric.inv_cov is None:
        cov = np.cov(values, rowvar=False, ddof=1)
        cov = np.atleast_2d(cov)
        d = cov.shape[0]
        trace = float(np.trace(cov))
        eps = 1e-6 * (trace / d if trace > 0 else 1.0)
        inv = np.linalg.inv(cov + eps * np.eye(d))
        return replace(metric, inv_cov=inv)
    return metric


def _rank(x: np.ndarray) -> np.ndarray:
    """Average ranks (1-based), ties averaged."""
    order = np.argsort(x, kind="stable")
    ranks = np.empty(len(x), dtype=float)
    sx = x[order]
    i = 0
    while i < len(x):
        j = i
        while j + 1 < len(x) and sx[j + 1] == sx[i]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc = x - x.mean()
    yc = y - y.mean()
    nx = np.sqrt(xc @ xc)
    ny = np.sqrt(yc @ yc)
    return float((xc @ yc) / (nx * ny))


def distance(metric: Metric, x, y) -> float:
    """Distance between two vectors under the given metric.

    Symmetric, and zero for identical inputs under every kind (cosine and
    correlation-style kinds are 1 - similarity).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"vector shapes differ: {x.shape} vs {y.shape}")
    if x.size < 1:
        raise ValueError("vectors must have length >= 1")
    kind = metric.kind
    if kind == "euclidean":
        return float(np.sqrt(np.sum((x - y) ** 2)))
    if kind == "sqeuclidean":
        return float(np.sum((x - y) ** 2))
    if kind == "seuclidean":
        if metric.dim_std is None:
            raise ValueError("seuclidean requires prepared context (per-dimension std)")
        return float(np.sqrt(np.sum(((x - y) / metric.dim_std) ** 2)))
    if kind == "cityblock":
        return float(np.sum(np.abs(x - y)))
    if kind == "mahalanobis":
        if metric.inv_cov is None:
            raise ValueError("mahalanobis requires prepared context (inverse covariance)")
        diff = x - y
        return float(np.sqrt(max(diff @ metric.inv_cov @ diff, 0.0)))
    if kind == "minkowski":
        return float(np.sum(np.abs(x - y) ** metric.p) ** (1.0 / metric.p))
    if kind == "cosine":
        nx = np.sqrt(x @ x)
        ny = np.sqrt(y @ y)
        if nx == 0 or ny == 0:
            raise ValueError("cosine distance undefined for zero vectors")
        return float(max(1.0 - (x @ y) / (nx * ny), 0.0))
    if kind == "correlation":
        if np.ptp(x) == 0 or np.ptp(y) == 0:
            raise ValueError("correlation distance undefined for constant vectors")
        return float(max(1.0 - _pearson(x, y), 0.0))
    if kind == "spearman":
        if np.ptp(x) == 0 or np.ptp(y) == 0:
            raise ValueError("spearman distance undefined for constant vectors")
        return float(max(1.0 - _pearson(_rank(x), _rank(y)), 0.0))
    if kind == "hamming":
        return float(np.mean(x != y))
    if kind == "jaccard":
        either = (x != 0) | (y != 0)
        if not either.any():
            return 0.0
        return float(np.mean(x[either] != y[either]))
    if kind == "chebychev":
        return float(np.max(np.abs(x - y)))
    raise ValueError(f"unknown metric kind {kind!r}")


def pairwise(metric: Metric, data) -> np.ndarray:
    """n x n symmetric distance matrix over the rows of data (zero diagonal)."""
    values = data.values if hasattr(data, "values") else np.asarray(data, dtype=float)
    metric = prepare_metric(metric, values)
    n = values.shape[0]
    kind = metric.kind

    if kind in ("euclidean", "sqeuclidean", "seuclidean", "mahalanobis"):
        pts = values
        if kind == "seuclidean":
            pts = values / metric.dim_std
        elif kind == "mahalanobis":
            # whiten so mahalanobis reduces to euclidean
            pts = values @ np.linalg.cholesky(metric.inv_cov)
        sq = np.sum(pts**2, axis=1)
        d2 = sq[:, None] + sq[None, :] - 2.0 * (pts @ pts.T)
        np.maximum(d2, 0.0, out=d2)
        dist = d2 if kind == "sqeuclidean" else np.sqrt(d2)
    elif kind in ("cosine", "correlation", "spearman"):
        pts = values
        if kind == "spearman":
            pts = np.apply_along_axis(_rank, 1, values)
        if kind in ("correlation", "spearman"):
            if np.any(np.ptp(values, axis=1) == 0):
                i = int(np.argmax(np.ptp(values, axis=1) == 0))
                raise ValueError(
                    f"{kind} distance undefined: row {i + 1} is constant"
                )
            pts = pts - pts.mean(axis=1, keepdims=True)
        norms = np.sqrt(np.sum(pts**2, axis=1))
        if kind == "cosine" and np.any(norms == 0):
            i = int(np.argmax(norms == 0))
            raise ValueError(f"cosine distance undefined: row {i + 1} is a zero vector")
        dist = 1.0 - (pts @ pts.T) / np.outer(norms, norms)
        np.maximum(dist, 0.0, out=dist)
    else:
        diff = values[:, None, :] - values[None, :, :]
        if kind == "cityblock":
            dist = np.sum(np.abs(diff), axis=2)
        elif kind == "chebychev":
            dist = np.max(np.abs(diff), axis=2)
        elif kind == "minkowski":
            dist = np.sum(np.abs(diff) ** metric.p, axis=2) ** (1.0 / metric.p)
        elif kind == "hamming":
            dist = np.mean(values[:, None, :] != values[None, :, :], axis=2)
        elif kind == "jaccard":
            neq = values[:, None, :] != values[None, :, :]
            either = (values[:, None, :] != 0) | (values[None, :, :] != 0)
            denom = either.sum(axis=2)
            with np.errstate(invalid="ignore"):
                dist = np.where(denom > 0, (neq & either).sum(axis=2) / np.maximum(denom, 1), 0.0)
        else:
            raise ValueError(f"unknown metric kind {kind!r}")

    dist = np.triu(dist, 1)
    return dist + dist.T
