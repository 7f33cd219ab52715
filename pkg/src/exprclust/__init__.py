"""Clustering comparison for gene-expression matrices.

Four clustering algorithms (K-means, fuzzy C-means, agglomerative
hierarchical, multiobjective evolutionary with classifier completion), nine
validity indices, a seeded grid runner that sweeps cluster counts, SVG
reports, and an HTTP service for the interactive studio.
"""

from .exprdata import (
    ExpressionMatrix,
    PreprocessConfig,
    load_matrix,
    normalize_rows,
    parse_matrix,
    preprocess,
    save_matrix,
    select_top_genes,
)
from .hier import Dendrogram, cut_tree, linkage_build
from .metrics import Metric, distance, pairwise, parse_metric, prepare_metric
from .moc import (
    GaConfig,
    ParetoFront,
    align_labels,
    evaluate_chromosome,
    fuzzy_majority_vote,
    mocsvm_run,
    nsga2_run,
    train_and_classify,
)
from .partitional import (
    FcmResult,
    KMeansResult,
    MembershipMatrix,
    Partition,
    RunConfig,
    fcm_run,
    kmeans_objective,
    kmeans_run,
)
from .runner import (
    GridSpec,
    GridSpecError,
    IndexCurve,
    ReportTable,
    best_of,
    derive_seed,
    grid_spec_from_json,
    persist_labels,
    run_grid,
)
from .validity import (
    DegeneratePartitionError,
    IndexSpec,
    PairCounts,
    adjusted_rand,
    db_index,
    dunn_index,
    i_index,
    index_spec,
    j_index,
    minkowski_ext,
    pair_counts,
    percent_correct,
    silhouette,
    xb_index,
)

__version__ = "0.1.0"
