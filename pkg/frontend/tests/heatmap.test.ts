import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { agreementColor } from "../src/theme.js";
import { renderHeatmap } from "../src/views/heatmap.js";
import { heatmapRound1 } from "./fixtures.js";
import { makeCtx, seededMock, type FetchMock } from "./mock.js";

let mock: FetchMock;

beforeEach(() => {
  mock = seededMock();
  mock.install();
});

afterEach(() => {
  mock.uninstall();
});

function cellAt(root: HTMLElement, row: string, col: string): HTMLElement {
  const cell = root.querySelector(`td[data-row="${row}"][data-col="${col}"]`);
  expect(cell).not.toBeNull();
  return cell as HTMLElement;
}

describe("heatmap view", () => {
  it("repeats every matrix value exactly, straight from the response", async () => {
    const { ctx } = makeCtx({ view: "heatmap", round: "r1" });
    const root = await renderHeatmap(ctx);
    const ids = heatmapRound1.annotator_ids;
    ids.forEach((rowId, i) => {
      ids.forEach((colId, j) => {
        expect(cellAt(root, rowId, colId).getAttribute("data-value")).toBe(
          String(heatmapRound1.values[i][j]),
        );
      });
    });
    expect(mock.callsTo("GET /heatmap?round=r1")).toHaveLength(1);
  });

  it("colors symmetric cells identically and the diagonal maximal", async () => {
    const { ctx } = makeCtx({ view: "heatmap", round: "r1" });
    const root = await renderHeatmap(ctx);
    const forward = cellAt(root, "p1", "p3").getAttribute("style");
    const backward = cellAt(root, "p3", "p1").getAttribute("style");
    expect(forward).toBe(backward);
    for (const id of heatmapRound1.annotator_ids) {
      expect(cellAt(root, id, id).getAttribute("style")).toContain(
        agreementColor(1),
      );
    }
  });

  it("routes a cell click to the comparison of those two annotators", async () => {
    const { ctx, patches } = makeCtx({ view: "heatmap", round: "r1" });
    const root = await renderHeatmap(ctx);
    cellAt(root, "p1", "p3").click();
    expect(patches).toEqual([{ view: "compare", pair: ["p1", "p3"] }]);
  });

  it("asks for a scope before requesting anything", async () => {
    const { ctx } = makeCtx({ view: "heatmap" });
    const root = await renderHeatmap(ctx);
    expect(root.className).toContain("empty-state");
    expect(mock.calls).toHaveLength(0);
  });
});
