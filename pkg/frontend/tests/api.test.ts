import { describe, expect, it } from "vitest";

import { ApiError, StudioApi } from "../src/api.js";

type Call = { url: string; init?: RequestInit };

function mockApi(handler: (url: string, init?: RequestInit) => Response | Promise<Response>) {
  const calls: Call[] = [];
  const api = new StudioApi("", async (url, init) => {
    calls.push({ url, init });
    return handler(url, init);
  });
  return { api, calls };
}

const json = (body: unknown, status = 200) =>
  new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });

describe("run submission", () => {
  const spec = {
    dataset_id: "ds-1",
    algorithms: { kmeans: {} },
    k_min: 2,
    k_max: 4,
    iterations: 1,
    internal_index: "silhouette",
    external_indices: [],
    base_seed: 7,
  };

  it("posts the spec as JSON and returns the run id", async () => {
    const { api, calls } = mockApi(() => json({ id: "run-9", status: "queued" }));
    const id = await api.submitRun(spec);
    expect(id).toBe("run-9");
    expect(calls[0].url).toBe("/runs");
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(calls[0].init?.body as string)).toEqual(spec);
  });

  it("surfaces field-level validation errors", async () => {
    const { api } = mockApi(() =>
      json({ detail: { errors: [{ field: "k_max", message: "k_max exceeds n" }] } }, 400),
    );
    const err = await api.submitRun(spec).catch((e) => e as ApiError);
    expect(err).toBeInstanceOf(ApiError);
    expect((err as ApiError).status).toBe(400);
    expect((err as ApiError).fieldErrors[0].field).toBe("k_max");
  });

  it("polls until the run is done", async () => {
    let polls = 0;
    const { api } = mockApi(() => {
      polls++;
      return json({
        id: "run-1",
        dataset_id: "ds-1",
        status: polls < 3 ? "running" : "done",
        report: { internal: {} },
        curves: [],
      });
    });
    const status = await api.pollRun("run-1", 1);
    expect(status.status).toBe("done");
    expect(polls).toBe(3);
  });
});

describe("dataset upload", () => {
  it("sends multipart form data with the preprocessing fields", async () => {
    const { api, calls } = mockApi(() =>
      json({ id: "ds-1", rows: 4, cols: 2, has_true_labels: true }),
    );
    const info = await api.uploadDataset(
      { name: "m.csv", content: "1,2,A\n3,4,B\n" },
      { classColumn: 3, topN: 2, normalize: true },
    );
    expect(info.rows).toBe(4);
    const form = calls[0].init?.body as FormData;
    expect(form.get("class_column")).toBe("3");
    expect(form.get("top_n")).toBe("2");
    expect(form.get("normalize")).toBe("true");
    expect(form.get("file")).toBeInstanceOf(Blob);
  });

  it("propagates upload validation messages", async () => {
    const { api } = mockApi(() => json({ detail: "non-numeric cell 'NA' at row 2" }, 400));
    const err = await api
      .uploadDataset({ name: "m.csv", content: "x" }, {})
      .catch((e) => e as ApiError);
    expect((err as ApiError).message).toContain("row 2");
  });
});

describe("session endpoints", () => {
  it("refresh reports the number of cleared curves", async () => {
    const { api, calls } = mockApi(() => json({ curves_cleared: 3 }));
    expect(await api.refresh()).toBe(3);
    expect(calls[0].url).toBe("/session/refresh");
    expect(calls[0].init?.method).toBe("POST");
  });

  it("curve render returns null when nothing accumulated", async () => {
    const { api } = mockApi(() => json({ detail: "no accumulated curves" }, 404));
    expect(await api.sessionCurvesSvg()).toBeNull();
  });

  it("labels endpoint unwraps the vector", async () => {
    const { api, calls } = mockApi(() => json({ algorithm: "kmeans", labels: [1, 1, 2] }));
    expect(await api.labels("run-1", "kmeans")).toEqual([1, 1, 2]);
    expect(calls[0].url).toBe("/runs/run-1/labels/kmeans");
  });

  it("render endpoint returns SVG text", async () => {
    const { api, calls } = mockApi(
      () => new Response("<svg/>", { status: 200, headers: { "content-type": "image/svg+xml" } }),
    );
    expect(await api.renderSvg("run-1", "heatmap", "fcm")).toBe("<svg/>");
    expect(calls[0].url).toBe("/runs/run-1/render?kind=heatmap&algorithm=fcm");
  });
});
