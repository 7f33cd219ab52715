import numpy as np
import pytest

from exprclust import ExpressionMatrix


@pytest.fixture
def suite4():
    """The 1-D four-point set {0, 1, 10, 11} with its natural 2-clustering."""
    X = np.array([[0.0], [1.0], [10.0], [11.0]])
    labels = np.array([1, 1, 2, 2])
    centers = np.array([[0.5], [10.5]])
    return X, labels, centers


def make_blobs(n_per=50, separation=8.0, seed=7):
    rng = np.random.default_rng(seed)
    centers = separation * np.array([[0, 0], [1, 0], [0, 1], [1, 1]], dtype=float)
    pts = np.vstack([rng.normal(c, 1.0, (n_per, 2)) for c in centers])
    truth = np.repeat([1, 2, 3, 4], n_per)
    return pts, truth


@pytest.fixture(scope="session")
def blobs200():
    """Four well-separated Gaussian blobs, n=200, d=2, known labels."""
    pts, truth = make_blobs()
    matrix = ExpressionMatrix(
        pts, [f"g{i + 1}" for i in range(len(pts))], ["c1", "c2"], truth
    )
    return matrix, truth
