/**
 * View renderers: each window of the studio as an HTML string.
 *
 * Views are pure functions of the state so they can be unit-tested without
 * a browser; main.ts mounts them and wires events.  Server-rendered SVGs
 * are embedded verbatim, never re-plotted client-side.
 */

import type { Algorithm } from "./api.js";
import { parseRawLiterals, rawAt } from "./report.js";
import {
  ALGORITHMS,
  EXTERNAL_INDICES,
  INTERNAL_INDICES,
  SharedFields,
  StudioState,
} from "./state.js";

export const ALGORITHM_TITLES: Record<Algorithm, string> = {
  kmeans: "K-Means",
  fcm: "Fuzzy C-Means",
  hier: "Hierarchical",
  mocsvm: "MocSvm",
};

const METRICS = [
  "euclidean", "sqeuclidean", "seuclidean", "cityblock", "mahalanobis",
  "minkowski:3", "cosine", "correlation", "spearman", "hamming", "jaccard",
  "chebychev",
];
const LINKAGES = ["single", "complete", "average", "weighted", "centroid", "median", "ward"];

export function escapeHtml(s: string): string {
  return s
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function numberField(
  id: string,
  label: string,
  value: number,
  tooltip: string,
  step = "1",
): string {
  return `<label class="field" title="${escapeHtml(tooltip)}">${escapeHtml(label)}
    <input type="number" id="${id}" value="${value}" step="${step}" title="${escapeHtml(tooltip)}"/>
  </label>`;
}

function selectField(
  id: string,
  label: string,
  options: readonly string[],
  selected: string,
  tooltip: string,
): string {
  const opts = options
    .map((o) => `<option value="${o}"${o === selected ? " selected" : ""}>${o}</option>`)
    .join("");
  return `<label class="field" title="${escapeHtml(tooltip)}">${escapeHtml(label)}
    <select id="${id}" title="${escapeHtml(tooltip)}">${opts}</select>
  </label>`;
}

export function navBar(active: string): string {
  const links = [
    ["home", "Home"],
    ...ALGORITHMS.map((a) => [a, ALGORITHM_TITLES[a]]),
    ["all", "All Clustering"],
    ["report", "Report"],
    ["viz", "Visualization"],
  ];
  const items = links
    .map(
      ([route, title]) =>
        `<a href="#/${route}" class="nav-link${route === active ? " active" : ""}">${title}</a>`,
    )
    .join("");
  return `<nav class="nav">${items}<button id="refresh-btn" class="refresh"
    title="Clear the accumulated index-curve plot">Refresh</button></nav>`;
}

export function renderHome(state: StudioState): string {
  const ds = state.dataset;
  const info = ds
    ? `<p class="dataset-info">Dataset <b>${ds.id}</b>: ${ds.rows} genes x ${ds.cols} conditions,
       true labels: <b>${ds.has_true_labels ? "yes" : "no"}</b></p>`
    : `<p class="dataset-info muted">No dataset loaded yet.</p>`;
  return `
  <section class="panel" id="home-panel">
    <h2>Dataset setup</h2>
    <form id="upload-form">
      <label class="field" title="Delimited text matrix: rows are genes, columns are conditions; comma or tab separated, optional header row">
        Expression matrix <input type="file" id="dataset-file" title="CSV or TSV file"/>
      </label>
      <label class="field" title="1-based column holding the true class labels; leave empty when the dataset has none">
        Class column <input type="number" id="class-column" min="1" title="1-based class attribute column"/>
      </label>
      <label class="field" title="Keep only the N genes with the highest variance">
        Top N genes <input type="number" id="top-n" min="1" title="number of highest-variance genes to keep"/>
      </label>
      <label class="field" title="Z-score every gene row to mean 0 and standard deviation 1">
        Normalize rows <input type="checkbox" id="normalize" title="per-row normalization"/>
      </label>
      <button type="submit" title="Upload and preprocess the dataset">Load dataset</button>
    </form>
    ${info}
    <p id="home-error" class="error">${escapeHtml(state.lastError)}</p>
  </section>`;
}

function sharedFieldset(prefix: string, shared: SharedFields, externalEnabled: boolean): string {
  const externals = EXTERNAL_INDICES.map((name) => {
    const checked = shared.externalIndices.includes(name) ? " checked" : "";
    const disabled = externalEnabled ? "" : " disabled";
    return `<label class="check" title="External index ${name} (needs true labels)">
      <input type="checkbox" id="${prefix}-ext-${name}" value="${name}"${checked}${disabled}/>${name}
    </label>`;
  }).join("");
  return `
    ${numberField(`${prefix}-k-min`, "Min clusters", shared.kMin, "Lower end of the cluster-count range")}
    ${numberField(`${prefix}-k-max`, "Max clusters", shared.kMax, "Upper end of the cluster-count range")}
    ${numberField(`${prefix}-iterations`, "Iterations", shared.iterations, "Seeded repetitions per cluster count; the best score wins")}
    ${selectField(`${prefix}-index`, "Internal index", INTERNAL_INDICES, shared.internalIndex, "Validity index that selects the best partition")}
    ${numberField(`${prefix}-seed`, "Base seed", shared.baseSeed, "Seed from which every grid cell derives its own")}
    <div class="externals" title="External validity indices">${externals}</div>`;
}

function paramsFieldset(state: StudioState, alg: Algorithm): string {
  const p = state.params;
  switch (alg) {
    case "kmeans":
      return (
        numberField("kmeans-max-iters", "Max iterations", p.kmeans.maxIters, "Lloyd iteration cap") +
        numberField("kmeans-tol", "Tolerance", p.kmeans.tol, "Center-shift convergence threshold", "any")
      );
    case "fcm":
      return (
        numberField("fcm-max-iters", "Max iterations", p.fcm.maxIters, "Update iteration cap") +
        numberField("fcm-tol", "Tolerance", p.fcm.tol, "Center-shift convergence threshold", "any") +
        numberField("fcm-fuzzifier", "Fuzzifier m", p.fcm.fuzzifier, "Membership softness exponent (> 1)", "any")
      );
    case "hier":
      return (
        selectField("hier-metric", "Distance", METRICS, p.hier.metric, "Pairwise distance metric") +
        selectField("hier-linkage", "Method", LINKAGES, p.hier.linkage, "Linkage rule; centroid/median/ward need euclidean")
      );
    case "mocsvm":
      return (
        numberField("mocsvm-population", "Population", p.mocsvm.populationSize, "GA population size (even)") +
        numberField("mocsvm-generations", "Generations", p.mocsvm.generations, "GA generation count") +
        numberField("mocsvm-pcrossover", "Pcrossover", p.mocsvm.pCrossover, "Crossover probability", "any") +
        numberField("mocsvm-pmutation", "Pmutation", p.mocsvm.pMutation, "Per-gene mutation probability", "any") +
        numberField("mocsvm-alpha", "Alpha", p.mocsvm.alpha, "Membership threshold for voting", "any") +
        numberField("mocsvm-beta", "Beta", p.mocsvm.beta, "Fuzzy majority voting threshold", "any") +
        numberField("mocsvm-weight", "Weight", p.mocsvm.svmWeight, "Classifier regularization trade-off", "any")
      );
  }
}

export function renderAlgorithmPanel(state: StudioState, alg: Algorithm): string {
  const shared = state.sharedViewFor(alg);
  const run = [...state.runs].reverse().find((r) => r.algorithms.length === 1 && r.algorithms[0] === alg);
  const status = run ? `<p class="run-status">Run ${run.id}: <b id="run-status">${run.status}</b></p>` : "";
  return `
  <section class="panel" id="${alg}-panel">
    <h2>${ALGORITHM_TITLES[alg]}</h2>
    <form id="${alg}-form">
      <fieldset class="shared-fields"><legend>Clustering setup (carried across windows)</legend>
        ${sharedFieldset(alg, shared, state.externalSelectable())}
      </fieldset>
      <fieldset class="algo-fields"><legend>${ALGORITHM_TITLES[alg]} parameters</legend>
        ${paramsFieldset(state, alg)}
      </fieldset>
      <button type="submit" id="${alg}-generate" title="Run the grid for this algorithm">Generate</button>
    </form>
    ${status}
    <div id="${alg}-result" class="result"></div>
    <p id="${alg}-error" class="error">${escapeHtml(state.lastError)}</p>
  </section>`;
}

export function renderAllPanel(state: StudioState): string {
  const shared = state.shared;
  const perAlg = ALGORITHMS.map(
    (alg) => `<fieldset class="algo-fields"><legend>${ALGORITHM_TITLES[alg]}</legend>
      ${paramsFieldset(state, alg)}</fieldset>`,
  ).join("");
  return `
  <section class="panel" id="all-panel">
    <h2>All clustering</h2>
    <form id="all-form">
      <fieldset class="shared-fields"><legend>Common inputs (given once)</legend>
        ${sharedFieldset("all", shared, state.externalSelectable())}
      </fieldset>
      ${perAlg}
      <button type="submit" id="all-generate" title="Run every algorithm with one combined submission">Done</button>
    </form>
    <div id="all-result" class="result"></div>
    <p id="all-error" class="error">${escapeHtml(state.lastError)}</p>
  </section>`;
}

/**
 * Report table rendered from the raw GET /report bytes: cell text is the
 * exact literal the server sent, nothing is recomputed or re-serialized.
 */
export function renderReportView(state: StudioState): string {
  if (!state.rawReportText || !state.report) {
    return `<section class="panel"><h2>Report</h2>
      <p class="muted">No results yet; run an algorithm first.</p></section>`;
  }
  const literals = parseRawLiterals(state.rawReportText);
  const report = state.report;
  const algs = Object.keys(report.internal).sort();

  const internalRows = algs
    .map((alg) => {
      const base = `internal.${alg}`;
      return `<tr>
        <td>${escapeHtml(alg)}</td>
        <td>${rawAt(literals, `${base}.index`).replace(/"/g, "")}</td>
        <td class="value-cell">${rawAt(literals, `${base}.value`)}</td>
        <td>${rawAt(literals, `${base}.clusters`)}</td>
        <td>${rawAt(literals, `${base}.seconds`)}</td>
      </tr>`;
    })
    .join("");
  let externalTable = "";
  if (report.external && Object.keys(report.external).length > 0) {
    const extAlgs = Object.keys(report.external).sort();
    const names = Object.keys(report.external[extAlgs[0]] ?? {}).sort();
    const header = names.map((n) => `<th>${n}</th><th>time</th>`).join("");
    const rows = extAlgs
      .map((alg) => {
        const cells = names
          .map(
            (n) =>
              `<td class="value-cell">${rawAt(literals, `external.${alg}.${n}.value`)}</td>
               <td>${rawAt(literals, `external.${alg}.${n}.seconds`)}</td>`,
          )
          .join("");
        return `<tr><td>${escapeHtml(alg)}</td>${cells}</tr>`;
      })
      .join("");
    externalTable = `<h3>External validity</h3>
      <table class="report external-report">
        <thead><tr><th>algorithm</th>${header}</tr></thead>
        <tbody>${rows}</tbody>
      </table>`;
  }
  return `
  <section class="panel" id="report-panel">
    <h2>Report</h2>
    <table class="report internal-report">
      <thead><tr><th>algorithm</th><th>index</th><th>best value</th>
        <th>clusters</th><th>cpu seconds</th></tr></thead>
      <tbody>${internalRows}</tbody>
    </table>
    ${externalTable}
    <details><summary>Raw report (byte-equivalent to GET /report)</summary>
      <pre id="raw-report">${escapeHtml(state.rawReportText)}</pre></details>
  </section>`;
}

export function renderVizView(
  state: StudioState,
  svgs: { curves?: string | null; heatmap?: string; profile?: string },
): string {
  const runOptions = state.runs
    .map((r) => `<option value="${r.id}">${r.id} (${r.algorithms.join("+")})</option>`)
    .join("");
  const algOptions = ALGORITHMS.map((a) => `<option value="${a}">${a}</option>`).join("");
  const curveBlock = svgs.curves
    ? `<div class="chart" id="curve-chart">${svgs.curves}</div>`
    : `<div class="chart empty" id="curve-chart"><p class="muted">No accumulated curves.</p></div>`;
  return `
  <section class="panel" id="viz-panel">
    <h2>Visualization</h2>
    <h3>Index curves (accumulated across runs)</h3>
    ${curveBlock}
    <h3>Per-run views</h3>
    <form id="viz-form">
      <label class="field" title="Finished run to visualize">Run
        <select id="viz-run">${runOptions}</select></label>
      <label class="field" title="Algorithm within the run">Algorithm
        <select id="viz-alg">${algOptions}</select></label>
      <button type="submit">Show heatmap + profile</button>
    </form>
    <div class="chart" id="heatmap-chart">${svgs.heatmap ?? ""}</div>
    <div class="chart" id="profile-chart">${svgs.profile ?? ""}</div>
  </section>`;
}

export function renderShell(active: string, body: string): string {
  return `${navBar(active)}<main>${body}</main>`;
}
