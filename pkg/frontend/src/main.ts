/**
 * DOM shell: hash routing and event wiring around the pure views.
 *
 * Run `exprclust serve` for the API, then serve this directory (index.html +
 * dist/) from any static file server on the same origin, or set
 * window.EXPRCLUST_API to the service base URL.
 */

import { Algorithm, StudioApi } from "./api.js";
import { ALGORITHMS, SharedFields, StudioState, buildGridSpec } from "./state.js";
import {
  renderAlgorithmPanel,
  renderAllPanel,
  renderHome,
  renderReportView,
  renderShell,
  renderVizView,
} from "./views.js";

declare global {
  interface Window {
    EXPRCLUST_API?: string;
  }
}

const api = new StudioApi(window.EXPRCLUST_API ?? "");
const state = new StudioState();
const root = document.getElementById("app")!;

function route(): string {
  return window.location.hash.replace(/^#\//, "") || "home";
}

function num(id: string): number {
  return Number((document.getElementById(id) as HTMLInputElement).value);
}

function str(id: string): string {
  return (document.getElementById(id) as HTMLInputElement | HTMLSelectElement).value;
}

function checked(id: string): boolean {
  return (document.getElementById(id) as HTMLInputElement).checked;
}

function readSharedFields(prefix: string): SharedFields {
  const externals = ["ari", "minkowski", "percent"].filter((name) => {
    const el = document.getElementById(`${prefix}-ext-${name}`) as HTMLInputElement | null;
    return el?.checked ?? false;
  });
  return {
    kMin: num(`${prefix}-k-min`),
    kMax: num(`${prefix}-k-max`),
    iterations: num(`${prefix}-iterations`),
    internalIndex: str(`${prefix}-index`),
    externalIndices: externals,
    baseSeed: num(`${prefix}-seed`),
  };
}

function applySharedEdits(prefix: string, into: (field: keyof SharedFields, v: any) => void) {
  const edited = readSharedFields(prefix);
  const reference = prefix === "all" ? state.shared : state.sharedViewFor(prefix as Algorithm);
  for (const field of Object.keys(edited) as (keyof SharedFields)[]) {
    const a = JSON.stringify(edited[field]);
    const b = JSON.stringify(reference[field]);
    if (a !== b) into(field, edited[field]);
  }
}

function readAlgorithmParams(alg: Algorithm) {
  const p = state.params;
  if (alg === "kmeans") {
    p.kmeans.maxIters = num("kmeans-max-iters");
    p.kmeans.tol = num("kmeans-tol");
  } else if (alg === "fcm") {
    p.fcm.maxIters = num("fcm-max-iters");
    p.fcm.tol = num("fcm-tol");
    p.fcm.fuzzifier = num("fcm-fuzzifier");
  } else if (alg === "hier") {
    p.hier.metric = str("hier-metric");
    p.hier.linkage = str("hier-linkage");
  } else {
    p.mocsvm.populationSize = num("mocsvm-population");
    p.mocsvm.generations = num("mocsvm-generations");
    p.mocsvm.pCrossover = num("mocsvm-pcrossover");
    p.mocsvm.pMutation = num("mocsvm-pmutation");
    p.mocsvm.alpha = num("mocsvm-alpha");
    p.mocsvm.beta = num("mocsvm-beta");
    p.mocsvm.svmWeight = num("mocsvm-weight");
  }
}

async function refreshReport() {
  const { raw, parsed } = await api.report();
  state.rawReportText = raw;
  state.report = parsed;
}

async function launchRun(algorithms: Algorithm[], from: Algorithm | undefined, resultId: string) {
  const spec = buildGridSpec(state, algorithms, from);
  const runId = await api.submitRun(spec);
  state.recordRun(runId, algorithms);
  const resultEl = () => document.getElementById(resultId);
  const el = resultEl();
  if (el) el.innerHTML = `<p>Run ${runId} queued ...</p>`;
  const status = await api.pollRun(runId);
  const rec = state.runs.find((r) => r.id === runId);
  if (rec) rec.status = status.status;
  if (status.status === "failed") {
    const live = resultEl();
    if (live) live.innerHTML = `<p class="error">Run failed: ${status.error ?? "unknown"}</p>`;
    return;
  }
  await refreshReport();
  state.curves = await api.sessionCurves();
  const live = resultEl();
  if (live && status.report) {
    const rows = Object.entries(status.report.internal)
      .map(
        ([alg, row]) =>
          `<li>${alg}: ${row.index} = ${row.value} at k = ${row.clusters}</li>`,
      )
      .join("");
    const svg = await api.renderSvg(runId, "index_curve").catch(() => "");
    live.innerHTML = `<ul>${rows}</ul><div class="chart">${svg}</div>`;
  }
}

function wireHome() {
  const form = document.getElementById("upload-form") as HTMLFormElement;
  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const fileInput = document.getElementById("dataset-file") as HTMLInputElement;
    const file = fileInput.files?.[0];
    if (!file) {
      state.lastError = "choose a dataset file first";
      render();
      return;
    }
    const classCol = str("class-column");
    const topN = str("top-n");
    try {
      state.dataset = await api.uploadDataset(
        { name: file.name, content: file },
        {
          classColumn: classCol ? Number(classCol) : undefined,
          topN: topN ? Number(topN) : undefined,
          normalize: checked("normalize"),
        },
      );
      state.lastError = "";
    } catch (err) {
      state.lastError = String((err as Error).message ?? err);
    }
    render();
  });
}

function wirePanel(alg: Algorithm) {
  const form = document.getElementById(`${alg}-form`) as HTMLFormElement;
  form.addEventListener("change", () => {
    applySharedEdits(alg, (field, v) => state.setSharedField(alg, field, v));
    readAlgorithmParams(alg);
  });
  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    applySharedEdits(alg, (field, v) => state.setSharedField(alg, field, v));
    readAlgorithmParams(alg);
    try {
      state.lastError = "";
      await launchRun([alg], alg, `${alg}-result`);
    } catch (err) {
      state.lastError = String((err as Error).message ?? err);
      render();
    }
  });
}

function wireAll() {
  const form = document.getElementById("all-form") as HTMLFormElement;
  form.addEventListener("change", () => {
    applySharedEdits("all", (field, v) => state.setSharedGlobal(field, v));
    for (const alg of ALGORITHMS) readAlgorithmParams(alg);
  });
  form.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    applySharedEdits("all", (field, v) => state.setSharedGlobal(field, v));
    for (const alg of ALGORITHMS) readAlgorithmParams(alg);
    try {
      state.lastError = "";
      await launchRun([...ALGORITHMS], undefined, "all-result");
    } catch (err) {
      state.lastError = String((err as Error).message ?? err);
      render();
    }
  });
}

function wireViz() {
  const form = document.getElementById("viz-form") as HTMLFormElement | null;
  form?.addEventListener("submit", async (ev) => {
    ev.preventDefault();
    const runId = str("viz-run");
    const alg = str("viz-alg");
    const heatmap = await api.renderSvg(runId, "heatmap", alg).catch((e) => `<p class="error">${e}</p>`);
    const profile = await api.renderSvg(runId, "profile", alg).catch((e) => `<p class="error">${e}</p>`);
    document.getElementById("heatmap-chart")!.innerHTML = heatmap;
    document.getElementById("profile-chart")!.innerHTML = profile;
  });
}

async function render() {
  const active = route();
  let body: string;
  if (active === "home") {
    body = renderHome(state);
  } else if ((ALGORITHMS as string[]).includes(active)) {
    body = renderAlgorithmPanel(state, active as Algorithm);
  } else if (active === "all") {
    body = renderAllPanel(state);
  } else if (active === "report") {
    await refreshReport().catch(() => undefined);
    body = renderReportView(state);
  } else if (active === "viz") {
    const curves = await api.sessionCurvesSvg().catch(() => null);
    body = renderVizView(state, { curves });
  } else {
    body = `<p class="error">Unknown view ${active}</p>`;
  }
  root.innerHTML = renderShell(active, body);

  document.getElementById("refresh-btn")?.addEventListener("click", async () => {
    await api.refresh();
    state.clearCurves();
    render();
  });
  if (active === "home") wireHome();
  else if ((ALGORITHMS as string[]).includes(active)) wirePanel(active as Algorithm);
  else if (active === "all") wireAll();
  else if (active === "viz") wireViz();
}

window.addEventListener("hashchange", () => void render());
void render();
