import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { renderHistogram } from "../src/views/histogram.js";
import { histogramReport } from "./fixtures.js";
import { makeCtx, seededMock, type FetchMock } from "./mock.js";

let mock: FetchMock;

beforeEach(() => {
  mock = seededMock();
  mock.install();
});

afterEach(() => {
  mock.uninstall();
});

describe("histogram view", () => {
  it("draws one bar per count row with the exact count", async () => {
    const { ctx } = makeCtx({ view: "histogram", round: "r1" });
    const root = await renderHistogram(ctx);
    const bars = Array.from(root.querySelectorAll(".bar"));
    expect(bars).toHaveLength(histogramReport.counts.length);
    const rendered = bars.map((bar) => ({
      annotator_id: bar.getAttribute("data-annotator"),
      document_id: bar.getAttribute("data-document"),
      count: Number(bar.getAttribute("data-count")),
    }));
    const expected = [...histogramReport.counts].map((row) => ({
      annotator_id: row.annotator_id,
      document_id: row.document_id,
      count: row.count,
    }));
    const byKey = (a: (typeof rendered)[number], b: (typeof rendered)[number]) =>
      `${a.document_id}/${a.annotator_id}/${a.count}` <
      `${b.document_id}/${b.annotator_id}/${b.count}`
        ? -1
        : 1;
    expect(rendered.sort(byKey)).toEqual(expected.sort(byKey));
  });

  it("groups bars by document", async () => {
    const { ctx } = makeCtx({ view: "histogram", round: "r1" });
    const root = await renderHistogram(ctx);
    const groups = Array.from(root.querySelectorAll(".bar-group"));
    const documents = new Set(
      histogramReport.counts.map((row) => row.document_id),
    );
    expect(groups).toHaveLength(documents.size);
    for (const group of groups) {
      const docId = group.getAttribute("data-document");
      for (const bar of group.querySelectorAll(".bar")) {
        expect(bar.getAttribute("data-document")).toBe(docId);
      }
    }
  });

  it("repeats the aggregate numbers exactly", async () => {
    const { ctx } = makeCtx({ view: "histogram", round: "r1" });
    const root = await renderHistogram(ctx);
    const rows = Array.from(root.querySelectorAll(".aggregates tbody tr"));
    expect(rows).toHaveLength(histogramReport.aggregates.length);
    rows.forEach((row, i) => {
      const agg = histogramReport.aggregates[i];
      const values = Array.from(row.querySelectorAll("td")).map((cell) =>
        cell.getAttribute("data-value"),
      );
      expect(values).toEqual([
        String(agg.mean),
        String(agg.median),
        String(agg.min),
        String(agg.max),
      ]);
    });
  });

  it("shows an empty-state message for a round with no annotations", async () => {
    const { ctx } = makeCtx({ view: "histogram", round: "r-empty" });
    const root = await renderHistogram(ctx);
    expect(root.querySelector(".empty-state")).not.toBeNull();
    expect(root.querySelectorAll(".bar")).toHaveLength(0);
  });
});
