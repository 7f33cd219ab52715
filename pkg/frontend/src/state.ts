/**
 * Studio state: panel models with shared-field carry-over.
 *
 * The cluster range, iteration count and index selections are shared across
 * the four algorithm panels: editing one of them in any panel re-populates
 * the same field in every panel the user has not explicitly overridden.  A
 * panel's own edit pins (overrides) that field for that panel, so later
 * edits elsewhere no longer clobber it.  Per-algorithm parameters (metric,
 * linkage, GA settings, ...) belong to a single panel only.
 */

import type {
  Algorithm,
  CurvePayload,
  DatasetInfo,
  GridSpecPayload,
  ReportPayload,
} from "./api.js";

export const ALGORITHMS: Algorithm[] = ["kmeans", "fcm", "hier", "mocsvm"];

export const INTERNAL_INDICES = ["j", "db", "dunn", "xb", "i", "silhouette"] as const;
export const EXTERNAL_INDICES = ["ari", "minkowski", "percent"] as const;

export interface SharedFields {
  kMin: number;
  kMax: number;
  iterations: number;
  internalIndex: string;
  externalIndices: string[];
  baseSeed: number;
}

export const SHARED_FIELD_NAMES: (keyof SharedFields)[] = [
  "kMin",
  "kMax",
  "iterations",
  "internalIndex",
  "externalIndices",
  "baseSeed",
];

export interface KmeansParams {
  maxIters: number;
  tol: number;
}

export interface FcmParams extends KmeansParams {
  fuzzifier: number;
}

export interface HierParams {
  metric: string;
  linkage: string;
}

export interface MocParams {
  populationSize: number;
  generations: number;
  pCrossover: number;
  pMutation: number;
  alpha: number;
  beta: number;
  svmWeight: number;
  fuzzifier: number;
}

export interface AlgorithmParams {
  kmeans: KmeansParams;
  fcm: FcmParams;
  hier: HierParams;
  mocsvm: MocParams;
}

export interface RunRecord {
  id: string;
  algorithms: Algorithm[];
  status: string;
}

const DEFAULT_SHARED: SharedFields = {
  kMin: 2,
  kMax: 7,
  iterations: 2,
  internalIndex: "silhouette",
  externalIndices: [],
  baseSeed: 42,
};

export function defaultParams(): AlgorithmParams {
  return {
    kmeans: { maxIters: 100, tol: 1e-6 },
    fcm: { maxIters: 100, tol: 1e-6, fuzzifier: 2.0 },
    hier: { metric: "euclidean", linkage: "average" },
    mocsvm: {
      populationSize: 50,
      generations: 100,
      pCrossover: 0.8,
      pMutation: 0.01,
      alpha: 0.5,
      beta: 0.5,
      svmWeight: 1.0,
      fuzzifier: 2.0,
    },
  };
}

export class StudioState {
  dataset: DatasetInfo | null = null;
  shared: SharedFields = { ...DEFAULT_SHARED };
  params: AlgorithmParams = defaultParams();
  runs: RunRecord[] = [];
  rawReportText = "";
  report: ReportPayload | null = null;
  curves: CurvePayload[] = [];
  lastError = "";

  private overrides: Map<Algorithm, Partial<SharedFields>> = new Map();

  /** Shared fields as panel `alg` sees them (its overrides win). */
  sharedViewFor(alg: Algorithm): SharedFields {
    return { ...this.shared, ...(this.overrides.get(alg) ?? {}) };
  }

  /**
   * A user edit of a shared field inside one panel: pins the value for that
   * panel and carries it over to every panel without an override of its own.
   */
  setSharedField<K extends keyof SharedFields>(
    alg: Algorithm,
    field: K,
    value: SharedFields[K],
  ): void {
    const mine = this.overrides.get(alg) ?? {};
    mine[field] = value;
    this.overrides.set(alg, mine);
    this.shared[field] = value;
  }

  /** Edits made in the all-clustering window update the shared store directly. */
  setSharedGlobal<K extends keyof SharedFields>(field: K, value: SharedFields[K]): void {
    this.shared[field] = value;
  }

  hasOverride(alg: Algorithm, field: keyof SharedFields): boolean {
    return this.overrides.get(alg)?.[field] !== undefined;
  }

  externalSelectable(): boolean {
    return this.dataset?.has_true_labels === true;
  }

  recordRun(id: string, algorithms: Algorithm[]): void {
    this.runs.push({ id, algorithms, status: "queued" });
  }

  clearCurves(): void {
    this.curves = [];
  }
}

function algorithmConfig(state: StudioState, alg: Algorithm): Record<string, number | string> {
  const p = state.params;
  switch (alg) {
    case "kmeans":
      return { max_iters: p.kmeans.maxIters, tol: p.kmeans.tol };
    case "fcm":
      return { max_iters: p.fcm.maxIters, tol: p.fcm.tol, fuzzifier: p.fcm.fuzzifier };
    case "hier":
      return { metric: p.hier.metric, linkage: p.hier.linkage };
    case "mocsvm":
      return {
        population_size: p.mocsvm.populationSize,
        generations: p.mocsvm.generations,
        p_crossover: p.mocsvm.pCrossover,
        p_mutation: p.mocsvm.pMutation,
        alpha: p.mocsvm.alpha,
        beta: p.mocsvm.beta,
        svm_weight: p.mocsvm.svmWeight,
        fuzzifier: p.mocsvm.fuzzifier,
      };
  }
}

/**
 * One form control, one GridSpec field.  A single-panel run takes the shared
 * fields as that panel displays them; the all-clustering window submits one
 * combined spec straight from the shared store.
 */
export function buildGridSpec(
  state: StudioState,
  algorithms: Algorithm[],
  from?: Algorithm,
): GridSpecPayload {
  if (!state.dataset) {
    throw new Error("no dataset uploaded");
  }
  const shared = from ? state.sharedViewFor(from) : { ...state.shared };
  const algs: GridSpecPayload["algorithms"] = {};
  for (const alg of algorithms) {
    algs[alg] = algorithmConfig(state, alg);
  }
  return {
    dataset_id: state.dataset.id,
    algorithms: algs,
    k_min: shared.kMin,
    k_max: shared.kMax,
    iterations: shared.iterations,
    internal_index: shared.internalIndex,
    external_indices: state.externalSelectable() ? [...shared.externalIndices] : [],
    base_seed: shared.baseSeed,
  };
}

/** Inverse of buildGridSpec over the shared fields (round-trip check). */
export function sharedFromSpec(spec: GridSpecPayload): SharedFields {
  return {
    kMin: spec.k_min,
    kMax: spec.k_max,
    iterations: spec.iterations,
    internalIndex: spec.internal_index,
    externalIndices: [...spec.external_indices],
    baseSeed: spec.base_seed,
  };
}
