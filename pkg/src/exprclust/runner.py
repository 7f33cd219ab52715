"""Grid execution: algorithms x cluster range x iterations.

Every grid cell gets its own seed derived by a stable hash of
(base_seed, algorithm, k, iteration), so any cell can be replayed in
isolation and results do not depend on execution order.  Per algorithm the
best-scoring partition under the selected internal index is retained, its
label vector persisted, and external indices evaluated against true labels
when available.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field

import numpy as np

from . import hier, metrics, validity
from .moc import GaConfig, mocsvm_run
from .partitional import Partition, RunConfig, fcm_run, kmeans_run

ALGORITHMS = ("kmeans", "fcm", "hier", "mocsvm")

__all__ = [
    "ALGORITHMS",
    "GridSpecError",
    "GridSpec",
    "Cell",
    "InternalRow",
    "ExternalRow",
    "ReportTable",
    "IndexCurve",
    "GridResult",
    "derive_seed",
    "best_of",
    "persist_labels",
    "run_grid",
    "grid_spec_from_json",
]


class GridSpecError(ValueError):
    """Invalid grid specification; carries the offending field name."""

    def __init__(self, fieldname: str, message: str):
        super().__init__(message)
        self.field = fieldname


@dataclass(frozen=True)
class GridSpec:
    algorithms: dict
    k_min: int
    k_max: int
    iterations: int
    internal_index: validity.IndexSpec
    external_indices: tuple = ()
    base_seed: int = 0
    output_dir: str | None = None

    def validate(self, n: int) -> None:
        if not self.algorithms:
            raise GridSpecError("algorithms", "at least one algorithm is required")
        for name in self.algorithms:
            if name not in ALGORITHMS:
                raise GridSpecError("algorithms", f"unknown algorithm {name!r}")
        if self.k_min < 2:
            raise GridSpecError("k_min", "k_min must be >= 2")
        if self.k_max < self.k_min:
            raise GridSpecError("k_max", "k_max must be >= k_min")
        if self.k_max > n:
            raise GridSpecError("k_max", f"k_max={self.k_max} exceeds object count n={n}")
        if self.iterations < 1:
            raise GridSpecError("iterations", "iterations must be positive")
        if self.internal_index.kind != "internal":
            raise GridSpecError(
                "internal_index", f"{self.internal_index.name} is not an internal index"
            )
        for spec in self.external_indices:
            if spec.kind != "external":
                raise GridSpecError(
                    "external_indices", f"{spec.name} is not an external index"
                )


@dataclass(frozen=True)
class Cell:
    k: int
    iteration: int
    value: float
    labels: np.ndarray


@dataclass
class InternalRow:
    algorithm: str
    index: str
    value: float
    k: int
    seconds: float
    labels_file: str | None = None
    fallbacks: int = 0


@dataclass
class ExternalRow:
    algorithm: str
    index: str
    value: float
    seconds: float


@dataclass
class ReportTable:
    """Best-per-algorithm summary; external part exists only with true labels."""

    internal: dict = field(default_factory=dict)
    external: dict = field(default_factory=dict)
    failed: dict = field(default_factory=dict)

    def merge(self, other: "ReportTable") -> None:
        """Overwrite rows with a later run's results (session accumulation)."""
        self.internal.update(other.internal)
        for alg, rows in other.external.items():
            self.external.setdefault(alg, {}).update(rows)
        self.failed.update(other.failed)

    def to_json(self, include_timings: bool = True) -> dict:
        internal = {}
        for alg, row in sorted(self.internal.items()):
            entry = {
                "index": row.index,
                "value": row.value,
                "clusters": row.k,
                "fallbacks": row.fallbacks,
            }
            if include_timings:
                entry["seconds"] = row.seconds
                entry["labels_file"] = row.labels_file
            internal[alg] = entry
        external = {}
        for alg, rows in sorted(self.external.items()):
            external[alg] = {}
            for name, row in sorted(rows.items()):
                entry = {"value": row.value}
                if include_timings:
                    entry["seconds"] = row.seconds
                external[alg][name] = entry
        out = {"internal": internal}
        if self.external:
            out["external"] = external
        if self.failed:
            out["failed"] = dict(sorted(self.failed.items()))
        return out

    def to_csv(self) -> str:
        lines = ["kind,algorithm,index,value,clusters,seconds"]
        for alg, row in sorted(self.internal.items()):
            lines.append(
                f"internal,{alg},{row.index},{row.value!r},{row.k},{row.seconds!r}"
            )
        for alg, rows in sorted(self.external.items()):
            for name, row in sorted(rows.items()):
                lines.append(f"external,{alg},{name},{row.value!r},,{row.seconds!r}")
        return "\n".join(lines) + "\n"


@dataclass
class IndexCurve:
    """Best index value at each k for one algorithm; None marks excluded cells."""

    algorithm: str
    index: str
    points: list

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "index": self.index,
            "points": [[k, v] for k, v in self.points],
        }


@dataclass
class GridResult:
    report: ReportTable
    curves: list
    best_labels: dict


def derive_seed(base_seed: int, algorithm: str, k: int, iteration: int) -> int:
    """Stable 64-bit cell seed; independent of platform and process."""
    key = f"{base_seed}:{algorithm}:{k}:{iteration}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


def best_of(cells, direction: str):
    """Extremum cell per direction; ties prefer smaller k, then earlier entry."""
    if not cells:
        raise ValueError("no cells to choose from")
    if direction not in ("maximize", "minimize"):
        raise ValueError(f"unknown direction {direction!r}")
    best = None
    for cell in cells:
        if best is None:
            best = cell
            continue
        if direction == "maximize":
            better = cell.value > best.value
        else:
            better = cell.value < best.value
        if better or (cell.value == best.value and cell.k < best.k):
            best = cell
    return best


def persist_labels(labels, out_dir, stem: str) -> str:
    """Write one integer per line; timestamped filename, monotonic on collision."""
    import os

    arr = labels.labels if isinstance(labels, Partition) else np.asarray(labels, dtype=int)
    os.makedirs(out_dir, exist_ok=True)
    ts = time.strftime("%Y%m%d-%H%M%S")
    base = f"{stem}_{ts}"
    path = os.path.join(out_dir, base + ".labels")
    suffix = 0
    while os.path.exists(path):
        suffix += 1
        path = os.path.join(out_dir, f"{base}-{suffix}.labels")
    with open(path, "w") as fh:
        fh.write("\n".join(str(int(v)) for v in arr) + "\n")
    return path


def load_labels(path) -> np.ndarray:
    with open(path) as fh:
        return np.array([int(line) for line in fh.read().split()], dtype=int)


def _hier_setup(data, config):
    metric = metrics.parse_metric(config.get("metric", "euclidean"))
    method = config.get("linkage", "average")
    dist = metrics.pairwise(metric, data)
    dendro = hier.linkage_build(dist, method, euclidean=metric.kind == "euclidean")
    return dendro


def _run_cell(data, algorithm: str, k: int, config: dict, seed: int, dendro=None):
    """Execute one grid cell; returns (labels, used_fallback)."""
    if algorithm == "kmeans":
        cfg = RunConfig(
            k=k,
            max_iters=int(config.get("max_iters", 100)),
            tol=float(config.get("tol", 1e-6)),
            seed=seed,
        )
        return kmeans_run(data, cfg).partition.labels, False
    if algorithm == "fcm":
        cfg = RunConfig(
            k=k,
            max_iters=int(config.get("max_iters", 100)),
            tol=float(config.get("tol", 1e-6)),
            seed=seed,
            fuzzifier=float(config.get("fuzzifier", 2.0)),
        )
        return fcm_run(data, cfg).partition.labels, False
    if algorithm == "hier":
        return hier.cut_tree(dendro, k).labels, False
    if algorithm == "mocsvm":
        cfg = GaConfig(
            population_size=int(config.get("population_size", 50)),
            generations=int(config.get("generations", 100)),
            p_crossover=float(config.get("p_crossover", 0.8)),
            p_mutation=float(config.get("p_mutation", 0.01)),
            alpha=float(config.get("alpha", 0.5)),
            beta=float(config.get("beta", 0.5)),
            svm_weight=float(config.get("svm_weight", 1.0)),
            fuzzifier=float(config.get("fuzzifier", 2.0)),
            seed=seed,
        )
        result = mocsvm_run(data, k, cfg)
        return result.partition.labels, result.used_fallback
    raise ValueError(f"unknown algorithm {algorithm!r}")


def run_grid(data, spec: GridSpec) -> GridResult:
    """Run the full grid and summarize.

    For every algorithm each (k, iteration) cell runs with its derived seed
    and is scored by the internal index; degenerate or invalid cells are
    excluded.  The best cell per direction wins, its labels are persisted
    when an output directory is set, and external indices are evaluated on
    it when the dataset carries true labels.
    """
    spec.validate(data.values.shape[0])
    index = spec.internal_index
    report = ReportTable()
    curves: list[IndexCurve] = []
    best_labels: dict[str, np.ndarray] = {}

    for algorithm in ALGORITHMS:
        if algorithm not in spec.algorithms:
            continue
        config = spec.algorithms[algorithm] or {}
        t0 = time.perf_counter()
        cells: list[Cell] = []
        fallbacks = 0
        dendro = None
        failure: str | None = None
        if algorithm == "hier":
            try:
                dendro = _hier_setup(data, config)
            except ValueError as exc:
                failure = str(exc)
        # hierarchical clustering is deterministic: one iteration is enough
        n_iters = 1 if algorithm == "hier" else spec.iterations
        if failure is None:
            for iteration in range(1, n_iters + 1):
                for k in range(spec.k_min, spec.k_max + 1):
                    seed = derive_seed(spec.base_seed, algorithm, k, iteration)
                    try:
                        labels, fell_back = _run_cell(
                            data, algorithm, k, config, seed, dendro
                        )
                        value = validity.evaluate_internal(index, data, labels)
                    except (validity.DegeneratePartitionError, ValueError):
                        continue
                    fallbacks += int(fell_back)
                    cells.append(Cell(k, iteration, float(value), labels))
        seconds = time.perf_counter() - t0
        if not cells:
            report.failed[algorithm] = failure or "all grid cells degenerate"
            continue

        best = best_of(cells, index.direction)
        labels_file = None
        if spec.output_dir:
            labels_file = persist_labels(
                best.labels, spec.output_dir, f"{algorithm}_k{best.k}_{index.name}"
            )
        report.internal[algorithm] = InternalRow(
            algorithm, index.name, best.value, best.k, seconds, labels_file, fallbacks
        )
        best_labels[algorithm] = best.labels

        points = []
        for k in range(spec.k_min, spec.k_max + 1):
            at_k = [c for c in cells if c.k == k]
            if at_k:
                points.append((k, best_of(at_k, index.direction).value))
            else:
                points.append((k, None))
        curves.append(IndexCurve(algorithm, index.name, points))

        if spec.external_indices and data.true_labels is not None:
            for ext in spec.external_indices:
                t1 = time.perf_counter()
                value = validity.evaluate_external(ext, data.true_labels, best.labels)
                report.external.setdefault(algorithm, {})[ext.name] = ExternalRow(
                    algorithm, ext.name, float(value), time.perf_counter() - t1
                )

    return GridResult(report, curves, best_labels)


def _index_from_json(obj, default_params=None) -> validity.IndexSpec:
    if isinstance(obj, str):
        return validity.index_spec(obj, **(default_params or {}))
    if isinstance(obj, dict):
        return validity.index_spec(obj["name"], **obj.get("params", {}))
    raise GridSpecError("internal_index", f"cannot parse index spec from {obj!r}")


def grid_spec_from_json(obj: dict) -> GridSpec:
    """Parse a GridSpec from its JSON form (config files and API payloads)."""
    if not isinstance(obj, dict):
        raise GridSpecError("spec", "grid spec must be a JSON object")
    algorithms = obj.get("algorithms")
    if isinstance(algorithms, list):
        algorithms = {name: {} for name in algorithms}
    if not isinstance(algorithms, dict):
        raise GridSpecError("algorithms", "algorithms must be a list or object")
    for key in ("k_min", "k_max", "iterations"):
        if key not in obj:
            raise GridSpecError(key, f"{key} is required")
        if not isinstance(obj[key], int):
            raise GridSpecError(key, f"{key} must be an integer")
    if "internal_index" not in obj:
        raise GridSpecError("internal_index", "internal_index is required")
    try:
        internal = _index_from_json(obj["internal_index"], obj.get("index_params"))
    except ValueError as exc:
        raise GridSpecError("internal_index", str(exc)) from exc
    externals = []
    for ext in obj.get("external_indices") or []:
        try:
            externals.append(_index_from_json(ext))
        except ValueError as exc:
            raise GridSpecError("external_indices", str(exc)) from exc
    return GridSpec(
        algorithms=algorithms,
        k_min=obj["k_min"],
        k_max=obj["k_max"],
        iterations=obj["iterations"],
        internal_index=internal,
        external_indices=tuple(externals),
        base_seed=int(obj.get("base_seed", 0)),
        output_dir=obj.get("output_dir"),
    )


def report_json_text(result_or_report, include_timings: bool = True) -> str:
    """Canonical JSON serialization (sorted keys) used by CLI and API alike."""
    report = (
        result_or_report.report
        if isinstance(result_or_report, GridResult)
        else result_or_report
    )
    return json.dumps(report.to_json(include_timings), sort_keys=True, indent=2) + "\n"
