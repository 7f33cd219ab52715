"""Loading and preprocessing of expression matrices.

Rows are genes (the objects being clustered), columns are experimental
conditions.  Matrices must be fully numeric and finite; an optional class
column carries known true labels for external validation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ExpressionMatrix",
    "PreprocessConfig",
    "load_matrix",
    "parse_matrix",
    "save_matrix",
    "select_top_genes",
    "normalize_rows",
    "preprocess",
]


@dataclass(frozen=True)
class ExpressionMatrix:
    """Immutable genes x conditions matrix with names and optional true labels."""

    values: np.ndarray
    gene_ids: list[str]
    condition_ids: list[str]
    true_labels: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2:
            raise ValueError("expression values must be a 2-D matrix")
        if values.shape[0] < 2 or values.shape[1] < 2:
            raise ValueError(
                f"matrix must be at least 2x2, got {values.shape[0]}x{values.shape[1]}"
            )
        if not np.all(np.isfinite(values)):
            i, j = np.argwhere(~np.isfinite(values))[0]
            raise ValueError(
                f"non-finite value at row {i + 1}, column {j + 1}; "
                "missing values are not allowed"
            )
        if len(self.gene_ids) != values.shape[0]:
            raise ValueError("gene_ids length must equal row count")
        if len(self.condition_ids) != values.shape[1]:
            raise ValueError("condition_ids length must equal column count")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.true_labels is not None:
            labels = np.asarray(self.true_labels, dtype=int)
            if labels.shape != (values.shape[0],):
                raise ValueError("true_labels length must equal row count")
            if labels.min() < 1:
                raise ValueError("true_labels must be positive integers")
            labels.setflags(write=False)
            object.__setattr__(self, "true_labels", labels)

    @property
    def n_genes(self) -> int:
        return self.values.shape[0]

    @property
    def n_conditions(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class PreprocessConfig:
    """Gene selection and normalization switches applied after loading."""

    top_n: int | str = "all"
    normalize: bool = False
    class_column: int | None = None

    def __post_init__(self):
        if self.top_n != "all" and (not isinstance(self.top_n, int) or self.top_n < 1):
            raise ValueError('top_n must be a positive integer or "all"')
        if self.class_column is not None and self.class_column < 1:
            raise ValueError("class_column is 1-based and must be >= 1")


def _remap_labels(tokens: list[str]) -> np.ndarray:
    """Map raw class tokens to consecutive integers 1..C by first appearance."""
    seen: dict[str, int] = {}
    out = np.empty(len(tokens), dtype=int)
    for i, tok in enumerate(tokens):
        if tok not in seen:
            seen[tok] = len(seen) + 1
        out[i] = seen[tok]
    return out


def load_matrix(path, class_column: int | None = None) -> ExpressionMatrix:
    """Load a delimited text matrix (comma or tab, auto-detected).

    A header row is detected when the first row does not parse as numbers;
    it then supplies the condition names.  When ``class_column`` (1-based)
    is given, that column is removed from the values and its cells become
    the true labels, remapped to 1..C in first-appearance order.
    """
    try:
        with open(path, "r", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc
    return parse_matrix(text, class_column)


def parse_matrix(text: str, class_column: int | None = None) -> ExpressionMatrix:
    """Parse delimited matrix text; see load_matrix for the format rules."""
    lines = text.splitlines()
    if not lines:
        raise ValueError("input is empty")
    delimiter = "\t" if "\t" in lines[0] else ","
    rows = [row for row in csv.reader(lines, delimiter=delimiter) if row]
    if not rows:
        raise ValueError("input contains no data rows")

    width = len(rows[0])
    for r, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(
                f"ragged input: row {r + 1} has {len(row)} cells, expected {width}"
            )
    if class_column is not None and not (1 <= class_column <= width):
        raise ValueError(
            f"class_column {class_column} out of range for {width} columns"
        )

    class _NonNumeric(ValueError):
        pass

    def parse_row(cells, row_no):
        out = []
        for c, cell in enumerate(cells):
            if class_column is not None and c == class_column - 1:
                continue
            try:
                v = float(cell)
            except ValueError:
                raise _NonNumeric(
                    f"non-numeric cell {cell!r} at row {row_no}, column {c + 1}"
                ) from None
            if not np.isfinite(v):
                raise ValueError(
                    f"non-finite cell {cell!r} at row {row_no}, column {c + 1}"
                )
            out.append(v)
        return out

    # Header detection: a first row with non-numeric cells names the columns.
    header = None
    first = None
    try:
        first = parse_row(rows[0], 1)
    except _NonNumeric:
        header = rows[0]

    values, label_tokens = [], []
    if first is not None:
        values.append(first)
        if class_column is not None:
            label_tokens.append(rows[0][class_column - 1].strip())
    for r, row in enumerate(rows[1:]):
        values.append(parse_row(row, r + 2))
        if class_column is not None:
            label_tokens.append(row[class_column - 1].strip())

    condition_ids = None
    if header is not None:
        condition_ids = [
            h.strip() for c, h in enumerate(header)
            if class_column is None or c != class_column - 1
        ]
    n_cols = width - (1 if class_column is not None else 0)
    if condition_ids is None:
        condition_ids = [f"c{j + 1}" for j in range(n_cols)]
    gene_ids = [f"g{i + 1}" for i in range(len(values))]
    labels = _remap_labels(label_tokens) if class_column is not None else None
    return ExpressionMatrix(np.array(values, dtype=float), gene_ids, condition_ids, labels)


def save_matrix(m: ExpressionMatrix, path, delimiter: str = ",") -> None:
    """Write the matrix as delimited text with a header row.

    True labels, when present, are appended as a final "class" column so the
    file round-trips through load_matrix with class_column = n_conditions + 1.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, delimiter=delimiter)
        header = list(m.condition_ids)
        if m.true_labels is not None:
            header.append("class")
        writer.writerow(header)
        for i in range(m.n_genes):
            row = [repr(float(v)) for v in m.values[i]]
            if m.true_labels is not None:
                row.append(str(int(m.true_labels[i])))
            writer.writerow(row)


def select_top_genes(m: ExpressionMatrix, n: int) -> ExpressionMatrix:
    """Keep the n rows with the largest sample variance, highest first.

    Ties keep the original row order (stable sort).
    """
    if not (1 <= n <= m.n_genes):
        raise ValueError(f"n must be in [1, {m.n_genes}], got {n}")
    variances = np.var(m.values, axis=1, ddof=1)
    order = np.argsort(-variances, kind="stable")[:n]
    return ExpressionMatrix(
        m.values[order].copy(),
        [m.gene_ids[i] for i in order],
        list(m.condition_ids),
        m.true_labels[order] if m.true_labels is not None else None,
    )


def normalize_rows(m: ExpressionMatrix) -> ExpressionMatrix:
    """Z-score every row to mean 0 and sample standard deviation 1."""
    flat = np.ptp(m.values, axis=1) == 0
    if flat.any():
        gene = m.gene_ids[int(np.argmax(flat))]
        raise ValueError(f"row {gene!r} is constant and cannot be normalized")
    means = m.values.mean(axis=1, keepdims=True)
    stds = m.values.std(axis=1, ddof=1, keepdims=True)
    return ExpressionMatrix(
        (m.values - means) / stds,
        list(m.gene_ids),
        list(m.condition_ids),
        m.true_labels,
    )


def preprocess(m: ExpressionMatrix, cfg: PreprocessConfig) -> ExpressionMatrix:
    """Apply top-variance gene selection then optional row normalization."""
    if cfg.top_n != "all":
        if cfg.top_n > m.n_genes:
            raise ValueError(f"top_n {cfg.top_n} exceeds row count {m.n_genes}")
        m = select_top_genes(m, cfg.top_n)
    if cfg.normalize:
        m = normalize_rows(m)
    return m
