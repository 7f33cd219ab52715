import { describe, expect, it } from "vitest";

import { StudioApi } from "../src/api.js";
import { parseRawLiterals, rawAt } from "../src/report.js";
import { StudioState } from "../src/state.js";
import { renderReportView } from "../src/views.js";

// serialized exactly the way the service does (sorted keys, indent 2); note
// the exponent literal that a JSON.parse/stringify round trip would mangle
const RAW_REPORT = `{
  "external": {
    "kmeans": {
      "ari": {
        "seconds": 1e-06,
        "value": 1.0
      }
    }
  },
  "internal": {
    "hier": {
      "clusters": 4,
      "fallbacks": 0,
      "index": "silhouette",
      "labels_file": null,
      "seconds": 0.0625,
      "value": 0.7810308704446918
    },
    "kmeans": {
      "clusters": 4,
      "fallbacks": 0,
      "index": "silhouette",
      "labels_file": "out/kmeans.labels",
      "seconds": 0.25,
      "value": 0.7810308704446918
    }
  }
}
`;

describe("raw literal extraction", () => {
  it("preserves the exact source text of every primitive", () => {
    const lits = parseRawLiterals(RAW_REPORT);
    expect(rawAt(lits, "internal.kmeans.value")).toBe("0.7810308704446918");
    expect(rawAt(lits, "internal.kmeans.clusters")).toBe("4");
    expect(rawAt(lits, "external.kmeans.ari.seconds")).toBe("1e-06");
    expect(rawAt(lits, "external.kmeans.ari.value")).toBe("1.0");
    expect(rawAt(lits, "internal.hier.labels_file")).toBe("null");
    expect(rawAt(lits, "internal.kmeans.index")).toBe('"silhouette"');
  });

  it("notes that JS re-serialization would NOT be byte-safe (why this exists)", () => {
    expect(JSON.stringify(JSON.parse("1e-06"))).not.toBe("1e-06");
    expect(JSON.stringify(JSON.parse("1.0"))).not.toBe("1.0");
  });

  it("handles arrays and escapes", () => {
    const lits = parseRawLiterals('{"a": [1.50, "x\\"y"], "b": {"c": true}}');
    expect(rawAt(lits, "a[0]")).toBe("1.50");
    expect(rawAt(lits, "a[1]")).toBe('"x\\"y"');
    expect(rawAt(lits, "b.c")).toBe("true");
  });

  it("rejects malformed input", () => {
    expect(() => parseRawLiterals('{"a": }')).toThrow(/malformed/);
  });
});

describe("report view", () => {
  function stateWithReport(): StudioState {
    const state = new StudioState();
    state.rawReportText = RAW_REPORT;
    state.report = JSON.parse(RAW_REPORT);
    return state;
  }

  it("shows every value cell byte-equivalently to the server payload", () => {
    const html = renderReportView(stateWithReport());
    expect(html).toContain(">0.7810308704446918<");
    expect(html).toContain(">1.0<");
    expect(html).toContain(">1e-06<");
    // no re-serialized variants anywhere
    expect(html).not.toContain("0.000001");
  });

  it("embeds the raw payload verbatim", () => {
    const html = renderReportView(stateWithReport());
    const m = /<pre id="raw-report">([\s\S]*?)<\/pre>/.exec(html);
    expect(m).not.toBeNull();
    const unescaped = m![1]
      .replace(/&lt;/g, "<")
      .replace(/&gt;/g, ">")
      .replace(/&quot;/g, '"')
      .replace(/&amp;/g, "&");
    expect(unescaped).toBe(RAW_REPORT);
  });

  it("renders a placeholder before any run", () => {
    const html = renderReportView(new StudioState());
    expect(html).toContain("No results yet");
  });

  it("keeps the raw bytes it fetched", async () => {
    const api = new StudioApi("", async () =>
      new Response(RAW_REPORT, { status: 200, headers: { "content-type": "application/json" } }),
    );
    const { raw, parsed } = await api.report();
    expect(raw).toBe(RAW_REPORT);
    expect(parsed.internal.kmeans.clusters).toBe(4);
  });
});
