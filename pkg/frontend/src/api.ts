/**
 * Typed client for the clustering service API.
 *
 * The studio never computes index values itself: everything shown in the
 * report and chart views comes verbatim from these endpoints.  The raw
 * response text of GET /report is kept alongside the parsed form so the
 * report view can stay byte-equivalent to the server payload.
 */

export type Algorithm = "kmeans" | "fcm" | "hier" | "mocsvm";

export interface DatasetInfo {
  id: string;
  rows: number;
  cols: number;
  has_true_labels: boolean;
}

export interface InternalRow {
  index: string;
  value: number;
  clusters: number;
  fallbacks: number;
  seconds?: number;
  labels_file?: string | null;
}

export interface ExternalCell {
  value: number;
  seconds?: number;
}

export interface ReportPayload {
  internal: Record<string, InternalRow>;
  external?: Record<string, Record<string, ExternalCell>>;
  failed?: Record<string, string>;
}

export interface CurvePayload {
  algorithm: string;
  index: string;
  points: [number, number | null][];
}

export interface RunStatus {
  id: string;
  status: "queued" | "running" | "done" | "failed";
  dataset_id: string;
  error?: string;
  report?: ReportPayload;
  curves?: CurvePayload[];
}

export interface GridSpecPayload {
  dataset_id: string;
  algorithms: Partial<Record<Algorithm, Record<string, number | string>>>;
  k_min: number;
  k_max: number;
  iterations: number;
  internal_index: string;
  external_indices: string[];
  base_seed: number;
}

export interface FieldError {
  field: string;
  message: string;
}

export class ApiError extends Error {
  status: number;
  fieldErrors: FieldError[];

  constructor(status: number, message: string, fieldErrors: FieldError[] = []) {
    super(message);
    this.status = status;
    this.fieldErrors = fieldErrors;
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class StudioApi {
  private baseUrl: string;
  private fetchFn: FetchLike;

  constructor(baseUrl = "", fetchFn: FetchLike = (...args) => fetch(...args)) {
    this.baseUrl = baseUrl.replace(/\/$/, "");
    this.fetchFn = fetchFn;
  }

  private async handle(resp: Response): Promise<any> {
    if (resp.ok) {
      return resp.json();
    }
    let detail: any = null;
    try {
      detail = (await resp.json()).detail;
    } catch {
      /* non-JSON error body */
    }
    if (detail && typeof detail === "object" && Array.isArray(detail.errors)) {
      const errors = detail.errors as FieldError[];
      throw new ApiError(resp.status, errors.map((e) => e.message).join("; "), errors);
    }
    throw new ApiError(resp.status, typeof detail === "string" ? detail : resp.statusText);
  }

  async uploadDataset(
    file: { name: string; content: string | Blob },
    options: { classColumn?: number; topN?: number; normalize?: boolean },
  ): Promise<DatasetInfo> {
    const form = new FormData();
    const blob =
      typeof file.content === "string"
        ? new Blob([file.content], { type: "text/csv" })
        : file.content;
    form.append("file", blob, file.name);
    if (options.classColumn != null) form.append("class_column", String(options.classColumn));
    if (options.topN != null) form.append("top_n", String(options.topN));
    form.append("normalize", String(options.normalize ?? false));
    const resp = await this.fetchFn(`${this.baseUrl}/datasets`, {
      method: "POST",
      body: form,
    });
    return this.handle(resp);
  }

  async submitRun(spec: GridSpecPayload): Promise<string> {
    const resp = await this.fetchFn(`${this.baseUrl}/runs`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(spec),
    });
    const body = await this.handle(resp);
    return body.id as string;
  }

  async runStatus(runId: string): Promise<RunStatus> {
    const resp = await this.fetchFn(`${this.baseUrl}/runs/${runId}`);
    return this.handle(resp);
  }

  /** Poll until the run reaches a terminal state. */
  async pollRun(runId: string, intervalMs = 500, timeoutMs = 600_000): Promise<RunStatus> {
    const deadline = Date.now() + timeoutMs;
    for (;;) {
      const status = await this.runStatus(runId);
      if (status.status === "done" || status.status === "failed") {
        return status;
      }
      if (Date.now() > deadline) {
        throw new ApiError(408, `run ${runId} did not finish in ${timeoutMs} ms`);
      }
      await new Promise((resolve) => setTimeout(resolve, intervalMs));
    }
  }

  async labels(runId: string, algorithm: string): Promise<number[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/runs/${runId}/labels/${algorithm}`);
    const body = await this.handle(resp);
    return body.labels as number[];
  }

  async renderSvg(runId: string, kind: string, algorithm?: string): Promise<string> {
    const params = new URLSearchParams({ kind });
    if (algorithm) params.set("algorithm", algorithm);
    const resp = await this.fetchFn(`${this.baseUrl}/runs/${runId}/render?${params}`);
    if (!resp.ok) return this.handle(resp);
    return resp.text();
  }

  /** Raw text must be preserved: the report view displays it byte-equivalently. */
  async report(): Promise<{ raw: string; parsed: ReportPayload }> {
    const resp = await this.fetchFn(`${this.baseUrl}/report`);
    if (!resp.ok) return this.handle(resp);
    const raw = await resp.text();
    return { raw, parsed: JSON.parse(raw) as ReportPayload };
  }

  async sessionCurves(): Promise<CurvePayload[]> {
    const resp = await this.fetchFn(`${this.baseUrl}/curves`);
    const body = await this.handle(resp);
    return body.curves as CurvePayload[];
  }

  async sessionCurvesSvg(): Promise<string | null> {
    const resp = await this.fetchFn(`${this.baseUrl}/curves/render`);
    if (resp.status === 404) return null;
    if (!resp.ok) return this.handle(resp);
    return resp.text();
  }

  async refresh(): Promise<number> {
    const resp = await this.fetchFn(`${this.baseUrl}/session/refresh`, { method: "POST" });
    const body = await this.handle(resp);
    return body.curves_cleared as number;
  }
}
