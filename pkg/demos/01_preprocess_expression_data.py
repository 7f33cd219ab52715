"""Loading and preprocessing an expression matrix.

Builds a small CSV on the fly, loads it with a class column, keeps the
highest-variance genes and z-scores each row — the standard preparation
before any clustering run.
"""

import tempfile

import numpy as np

from exprclust import load_matrix, normalize_rows, save_matrix, select_top_genes

rng = np.random.default_rng(0)

# synthesize a matrix: 30 genes x 6 conditions, two known classes,
# with the first ten genes far more variable than the rest
values = rng.normal(0.0, 0.3, size=(30, 6))
values[:10] += rng.normal(0.0, 3.0, size=(10, 6))
labels = np.array([1] * 15 + [2] * 15)

with tempfile.NamedTemporaryFile("w", suffix=".csv", delete=False) as fh:
    fh.write("t0,t1,t2,t3,t4,t5,class\n")
    for row, lab in zip(values, labels):
        fh.write(",".join(f"{v:.6f}" for v in row) + f",{lab}\n")
    path = fh.name

matrix = load_matrix(path, class_column=7)
print(f"loaded {matrix.n_genes} genes x {matrix.n_conditions} conditions")
print(f"true labels present: {matrix.true_labels is not None}")
print(f"condition names from the header: {matrix.condition_ids}")

top = select_top_genes(matrix, 10)
print(f"\ntop-10 variance genes: {top.gene_ids}")
variances = np.var(top.values, axis=1, ddof=1)
print(f"their variances (descending): {np.round(variances, 2)}")

normalized = normalize_rows(top)
print(f"\nafter normalization:")
print(f"  row means  ~ {np.abs(normalized.values.mean(axis=1)).max():.2e}")
print(f"  row stds   ~ {normalized.values.std(axis=1, ddof=1)[:3]}")

out = path.replace(".csv", "_prepared.csv")
save_matrix(normalized, out)
print(f"\nwrote prepared matrix to {out}")
