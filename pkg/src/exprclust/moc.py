"""Multiobjective evolutionary clustering with classifier completion.

An NSGA-II loop over center-encoded chromosomes minimizes the fuzzy
within-cluster variance and the Xie-Beni ratio simultaneously.  The final
non-dominated front is label-aligned, condensed by fuzzy majority voting
into a high-confidence training set, and a linear one-vs-rest max-margin
classifier assigns the remaining points.

Everything is deterministic for a fixed seed: random draws are consumed in a
fixed sequential order and the classifier uses seeded shuffling with a fixed
epoch schedule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .partitional import MembershipMatrix, Partition, _fcm_memberships, _sq_dists, relabel_first_appearance

MIN_CENTER_SEP = 1e-12

__all__ = [
    "ConsensusError",
    "Chromosome",
    "GaConfig",
    "MocSolution",
    "ParetoFront",
    "MocResult",
    "evaluate_chromosome",
    "non_dominated_sort",
    "crowding_distance",
    "nsga2_run",
    "align_labels",
    "fuzzy_majority_vote",
    "train_and_classify",
    "mocsvm_run",
]


class ConsensusError(ValueError):
    """Voting or classification preconditions failed; caller should fall back."""


@dataclass(frozen=True)
class Chromosome:
    """Center-encoded solution with cached objective values."""

    centers: np.ndarray
    j_m: float
    xb: float

    def __post_init__(self):
        centers = np.asarray(self.centers, dtype=float)
        centers.setflags(write=False)
        object.__setattr__(self, "centers", centers)


@dataclass(frozen=True)
class GaConfig:
    population_size: int = 50
    generations: int = 100
    p_crossover: float = 0.8
    p_mutation: float = 0.01
    alpha: float = 0.5
    beta: float = 0.5
    svm_weight: float = 1.0
    fuzzifier: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if self.population_size < 4 or self.population_size % 2:
            raise ValueError("population_size must be an even integer >= 4")
        if self.generations < 1:
            raise ValueError("generations must be positive")
        for name in ("p_crossover", "p_mutation", "alpha", "beta"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.svm_weight <= 0:
            raise ValueError("svm_weight must be > 0")
        if self.fuzzifier <= 1:
            raise ValueError("fuzzifier must be > 1")


@dataclass(frozen=True)
class MocSolution:
    chromosome: Chromosome
    membership: MembershipMatrix

    def hard_labels(self) -> np.ndarray:
        """Per-column argmax labels in 1..K, ties to the lowest index."""
        return np.argmax(self.membership.u, axis=0) + 1


@dataclass(frozen=True)
class ParetoFront:
    solutions: tuple[MocSolution, ...]

    def __post_init__(self):
        if not self.solutions:
            raise ValueError("Pareto front must be non-empty")
        objs = self.objectives()
        for i in range(len(objs)):
            for j in range(len(objs)):
                if i != j and _dominates(objs[i], objs[j]):
                    raise ValueError("front contains a dominated solution")

    def objectives(self) -> np.ndarray:
        return np.array([(s.chromosome.j_m, s.chromosome.xb) for s in self.solutions])

    def to_json(self) -> dict:
        """Objective pairs plus hard labels per solution, for UI inspection."""
        return {
            "solutions": [
                {
                    "j_m": s.chromosome.j_m,
                    "xb": s.chromosome.xb,
                    "labels": [int(v) for v in s.hard_labels()],
                }
                for s in self.solutions
            ]
        }

    def __len__(self) -> int:
        return len(self.solutions)


@dataclass(frozen=True)
class MocResult:
    partition: Partition
    front: ParetoFront
    used_fallback: bool


def _values(data) -> np.ndarray:
    return data.values if hasattr(data, "values") else np.asarray(data, dtype=float)


def _min_center_sep(centers: np.ndarray) -> float:
    k = centers.shape[0]
    diff = centers[:, None, :] - centers[None, :, :]
    d = np.sqrt(np.maximum(np.sum(diff**2, axis=2), 0.0))
    return float(d[np.triu_indices(k, 1)].min())


def evaluate_chromosome(data, centers, m: float = 2.0):
    """Objectives at fixed centers: one fuzzy membership half-step, no center update.

    Returns (j_m, xb, MembershipMatrix).  Centers closer than 1e-12 are
    rejected to keep the Xie-Beni separation away from underflow.
    """
    values = _values(data)
    centers = np.asarray(centers, dtype=float)
    if centers.shape[0] < 2:
        raise ValueError("need at least 2 centers")
    if not np.all(np.isfinite(centers)):
        raise ValueError("centers must be finite")
    if _min_center_sep(centers) < MIN_CENTER_SEP:
        raise ValueError("duplicate centers: minimum separation below 1e-12")
    u = _fcm_memberships(values, centers, m)
    d2 = _sq_dists(values, centers)
    j_m = float(np.sum(u**m * d2))
    sep = _min_center_sep(centers) ** 2
    xb = float(np.sum(u**2 * d2) / (values.shape[0] * sep))
    return j_m, xb, MembershipMatrix(u, m)


def _dominates(f1, f2) -> bool:
    return bool(np.all(f1 <= f2) and np.any(f1 < f2))


def non_dominated_sort(objectives: np.ndarray) -> list[np.ndarray]:
    """Split points (rows of a minimization objective matrix) into ranked fronts."""
    objs = np.asarray(objectives, dtype=float)
    n = objs.shape[0]
    le = np.all(objs[:, None, :] <= objs[None, :, :], axis=2)
    lt = np.any(objs[:, None, :] < objs[None, :, :], axis=2)
    dominates = le & lt  # [i, j] True when i dominates j
    dom_count = dominates.sum(axis=0).astype(int)
    fronts: list[np.ndarray] = []
    remaining = np.ones(n, dtype=bool)
    while remaining.any():
        current = np.where(remaining & (dom_count == 0))[0]
        fronts.append(current)
        remaining[current] = False
        dom_count -= dominates[current].sum(axis=0)
    return fronts


def crowding_distance(objectives: np.ndarray) -> np.ndarray:
    """NSGA-II crowding distance within one front."""
    objs = np.asarray(objectives, dtype=float)
    n = objs.shape[0]
    dist = np.zeros(n)
    if n <= 2:
        return np.full(n, np.inf)
    for m in range(objs.shape[1]):
        order = np.argsort(objs[:, m], kind="stable")
        vals = objs[order, m]
        span = vals[-1] - vals[0]
        dist[order[0]] = np.inf
        dist[order[-1]] = np.inf
        if span > 0:
            dist[order[1:-1]] += (vals[2:] - vals[:-2]) / span
    return dist


def _rank_and_crowding(objs: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    ranks = np.empty(objs.shape[0], dtype=int)
    crowd = np.empty(objs.shape[0], dtype=float)
    for r, front in enumerate(non_dominated_sort(objs)):
        ranks[front] = r
        crowd[front] = crowding_distance(objs[front])
    return ranks, crowd


class _GaState:
    """Operator helpers bound to one dataset and configuration."""

    def __init__(self, values, k, cfg):
        self.values = values
        self.k = k
        self.cfg = cfg
        self.n, self.d = values.shape
        span = values.max(axis=0) - values.min(axis=0)
        self.sigma = np.tile(0.1 * span, k)  # per-gene mutation scale

    def random_centers(self, rng) -> np.ndarray:
        for _ in range(100):
            centers = self.values[rng.choice(self.n, size=self.k, replace=False)].copy()
            if _min_center_sep(centers) >= MIN_CENTER_SEP:
                return centers
        # duplicate-heavy data: jitter the last draw into validity
        scale = max(float(self.sigma.max()), 1e-6)
        return centers + rng.normal(0.0, scale, centers.shape)

    def crossover(self, rng, p1: np.ndarray, p2: np.ndarray):
        g1, g2 = p1.ravel().copy(), p2.ravel().copy()
        if rng.random() < self.cfg.p_crossover:
            point = int(rng.integers(1, self.k * self.d))
            g1[point:], g2[point:] = g2[point:].copy(), g1[point:].copy()
        return g1.reshape(self.k, self.d), g2.reshape(self.k, self.d)

    def mutate(self, rng, centers: np.ndarray) -> np.ndarray:
        for _ in range(10):
            genes = centers.ravel().copy()
            mask = rng.random(genes.size) < self.cfg.p_mutation
            if mask.any():
                genes[mask] += rng.normal(0.0, 1.0, int(mask.sum())) * self.sigma[mask]
            candidate = genes.reshape(self.k, self.d)
            if _min_center_sep(candidate) >= MIN_CENTER_SEP:
                return candidate
        return self.random_centers(rng)


def nsga2_run(data, k: int, cfg: GaConfig) -> ParetoFront:
    """Standard NSGA-II loop returning the final rank-1 front, deduplicated.

    Binary tournament on (rank, crowding distance), single-point crossover on
    the flattened center vector, per-gene Gaussian mutation with scale 0.1x
    the per-dimension data range, and elitist environmental selection.
    """
    values = _values(data)
    if k < 2 or k > values.shape[0]:
        raise ValueError(f"k must be in [2, {values.shape[0]}]")
    rng = np.random.default_rng(cfg.seed)
    state = _GaState(values, k, cfg)
    m = cfg.fuzzifier
    pop_n = cfg.population_size

    pop = [state.random_centers(rng) for _ in range(pop_n)]
    evals = [evaluate_chromosome(values, c, m) for c in pop]
    objs = np.array([(e[0], e[1]) for e in evals])

    for _ in range(cfg.generations):
        ranks, crowd = _rank_and_crowding(objs)

        def better(a, b):
            if ranks[a] != ranks[b]:
                return a if ranks[a] < ranks[b] else b
            if crowd[a] != crowd[b]:
                return a if crowd[a] > crowd[b] else b
            return a

        parents = []
        for _i in range(pop_n):
            a, b = int(rng.integers(pop_n)), int(rng.integers(pop_n))
            parents.append(better(a, b))

        children = []
        for i in range(0, pop_n, 2):
            c1, c2 = state.crossover(rng, pop[parents[i]], pop[parents[i + 1]])
            children.append(state.mutate(rng, c1))
            children.append(state.mutate(rng, c2))
        child_evals = [evaluate_chromosome(values, c, m) for c in children]
        child_objs = np.array([(e[0], e[1]) for e in child_evals])

        all_pop = pop + children
        all_evals = evals + child_evals
        all_objs = np.vstack([objs, child_objs])
        fronts = non_dominated_sort(all_objs)
        keep: list[int] = []
        for front in fronts:
            if len(keep) + len(front) <= pop_n:
                keep.extend(front.tolist())
            else:
                crowd_f = crowding_distance(all_objs[front])
                order = np.argsort(-crowd_f, kind="stable")
                keep.extend(front[order][: pop_n - len(keep)].tolist())
                break
        pop = [all_pop[i] for i in keep]
        evals = [all_evals[i] for i in keep]
        objs = all_objs[keep]

    first_front = non_dominated_sort(objs)[0]
    solutions, seen = [], set()
    for i in first_front:
        key = pop[i].tobytes()
        if key in seen:
            continue
        seen.add(key)
        j_m, xb, u = evals[i]
        solutions.append(MocSolution(Chromosome(pop[i], j_m, xb), u))
    return ParetoFront(tuple(solutions))


def align_labels(front: ParetoFront) -> ParetoFront:
    """Renumber every solution's clusters to best match the first solution.

    Cluster correspondence is the optimal assignment on the K x K label
    contingency table; objectives and partition structure are unchanged.
    """
    ref = front.solutions[0].hard_labels()
    k = front.solutions[0].membership.k
    aligned = [front.solutions[0]]
    for sol in front.solutions[1:]:
        labels = sol.hard_labels()
        table = np.zeros((k, k), dtype=int)
        np.add.at(table, (ref - 1, labels - 1), 1)
        rows, cols = linear_sum_assignment(-table)
        perm = np.empty(k, dtype=int)
        perm[rows] = cols  # new row r holds old row perm[r]
        u = sol.membership.u[perm]
        centers = sol.chromosome.centers[perm]
        chrom = Chromosome(centers, sol.chromosome.j_m, sol.chromosome.xb)
        aligned.append(MocSolution(chrom, MembershipMatrix(u, sol.membership.fuzzifier)))
    return ParetoFront(tuple(aligned))


def fuzzy_majority_vote(front: ParetoFront, alpha: float, beta: float):
    """Select confidently and consistently clustered points as a training set.

    A point trains with its plurality cluster when the fraction of front
    solutions that both give it maximum membership >= alpha and vote for that
    plurality exceeds beta.  Plurality ties exclude the point.

    Returns (train_labels, train_mask); excluded points carry label 0.
    Raises ConsensusError when the training set is empty or misses a cluster.
    """
    sols = front.solutions
    k = sols[0].membership.k
    n_points = sols[0].membership.u.shape[1]
    votes = np.stack([s.hard_labels() for s in sols])  # (S, n)
    maxmem = np.stack([s.membership.u.max(axis=0) for s in sols])
    s_count = len(sols)

    labels = np.zeros(n_points, dtype=int)
    mask = np.zeros(n_points, dtype=bool)
    for i in range(n_points):
        counts = np.bincount(votes[:, i], minlength=k + 1)[1:]
        top = counts.max()
        winners = np.where(counts == top)[0]
        if len(winners) != 1:
            continue
        plurality = int(winners[0]) + 1
        qualified = np.sum((votes[:, i] == plurality) & (maxmem[:, i] >= alpha))
        if qualified / s_count > beta:
            labels[i] = plurality
            mask[i] = True

    if not mask.any():
        raise ConsensusError("fuzzy majority voting produced an empty training set")
    present = np.unique(labels[mask])
    if len(present) < k:
        missing = sorted(set(range(1, k + 1)) - set(present.tolist()))
        raise ConsensusError(f"training set misses cluster(s) {missing}")
    return labels, mask


def train_and_classify(data, train_labels, train_mask, svm_weight: float, seed: int = 0,
                       epochs: int = 50) -> Partition:
    """Fit a linear one-vs-rest max-margin classifier and label the rest.

    Hinge loss with L2 penalty of strength 1/svm_weight, trained by
    epoch-based subgradient descent with step 1/(lambda * t), seeded
    shuffling, and iterates projected onto the ball of radius
    sqrt(svm_weight).  Features are standardized on the training set so the
    fixed schedule converges regardless of data scale.  Training points keep
    their voted labels.
    """
    values = _values(data)
    train_labels = np.asarray(train_labels, dtype=int)
    train_mask = np.asarray(train_mask, dtype=bool)
    if not train_mask.any():
        raise ConsensusError("empty training set")
    classes = np.unique(train_labels[train_mask])
    if len(classes) < 2:
        raise ConsensusError("training set covers fewer than 2 clusters")

    mean = values[train_mask].mean(axis=0)
    std = values[train_mask].std(axis=0) + 1e-12
    x_train = np.hstack(
        [(values[train_mask] - mean) / std, np.ones((int(train_mask.sum()), 1))]
    )
    y_train = train_labels[train_mask]
    lam = 1.0 / svm_weight
    radius = 1.0 / np.sqrt(lam)
    rng = np.random.default_rng(seed)

    weights = np.zeros((len(classes), x_train.shape[1]))
    for ci, cls in enumerate(classes):
        y = np.where(y_train == cls, 1.0, -1.0)
        w = np.zeros(x_train.shape[1])
        t = 0
        for _ in range(epochs):
            for i in rng.permutation(len(y)):
                t += 1
                eta = 1.0 / (lam * t)
                if y[i] * (w @ x_train[i]) < 1.0:
                    w = (1.0 - eta * lam) * w + eta * y[i] * x_train[i]
                else:
                    w = (1.0 - eta * lam) * w
                norm = float(np.sqrt(w @ w))
                if norm > radius:
                    w *= radius / norm
        weights[ci] = w

    out = train_labels.copy()
    rest = ~train_mask
    if rest.any():
        x_rest = np.hstack(
            [(values[rest] - mean) / std, np.ones((int(rest.sum()), 1))]
        )
        scores = x_rest @ weights.T
        out[rest] = classes[np.argmax(scores, axis=1)]
    try:
        return Partition(out, int(out.max()))
    except ValueError as exc:
        raise ConsensusError(f"classifier left a cluster empty: {exc}") from exc


def mocsvm_run(data, k: int, cfg: GaConfig) -> MocResult:
    """Full pipeline: evolve, align, vote, classify; falls back to best XB.

    When voting or classification preconditions fail (or the front is a
    single solution, which makes voting degenerate with every point
    training), the result is the argmax partition of the front solution with
    the lowest Xie-Beni value and the fallback flag is set accordingly.
    """
    values = _values(data)
    front = align_labels(nsga2_run(values, k, cfg))

    def argmax_partition(sol: MocSolution) -> Partition:
        labels, _ = relabel_first_appearance(sol.hard_labels())
        return Partition(labels, int(labels.max()))

    if len(front) == 1:
        return MocResult(argmax_partition(front.solutions[0]), front, False)
    try:
        labels, mask = fuzzy_majority_vote(front, cfg.alpha, cfg.beta)
        partition = train_and_classify(values, labels, mask, cfg.svm_weight, seed=cfg.seed)
        return MocResult(partition, front, False)
    except ConsensusError:
        xbs = [s.chromosome.xb for s in front.solutions]
        best = front.solutions[int(np.argmin(xbs))]
        return MocResult(argmax_partition(best), front, True)
