import { afterEach, beforeEach, describe, expect, it } from "vitest";

import { renderRevision } from "../src/views/revision.js";
import { consensusR1, convergencePoints, guideline1 } from "./fixtures.js";
import { flush, makeCtx, seededMock, type FetchMock } from "./mock.js";

let mock: FetchMock;

beforeEach(() => {
  mock = seededMock();
  mock.install();
});

afterEach(() => {
  mock.uninstall();
});

describe("revision view", () => {
  it("appends an accepted consensus fact to the draft", async () => {
    const { ctx, session } = makeCtx({ view: "revision", round: "r1" });
    const root = await renderRevision(ctx);
    const suggestions = root.querySelectorAll(".suggestion");
    expect(suggestions).toHaveLength(consensusR1.length);

    (suggestions[0].querySelector(".accept") as HTMLElement).click();
    expect(session.draftFacts).toEqual([consensusR1[0].text]);
    expect(root.querySelectorAll(".draft-fact")).toHaveLength(1);

    (suggestions[1].querySelector(".accept") as HTMLElement).click();
    expect(session.draftFacts).toEqual([
      consensusR1[0].text,
      consensusR1[1].text,
    ]);
    expect(root.querySelectorAll(".draft-fact")).toHaveLength(2);
  });

  it("drops a rejected suggestion without touching the draft", async () => {
    const { ctx, session } = makeCtx({ view: "revision", round: "r1" });
    const root = await renderRevision(ctx);
    (root.querySelector(".suggestion .reject") as HTMLElement).click();
    expect(root.querySelectorAll(".suggestion")).toHaveLength(
      consensusR1.length - 1,
    );
    expect(session.draftFacts).toEqual([]);
  });

  it("saves the edited guideline as version previous + 1", async () => {
    mock.route("PUT /guidelines/g1-v2", { id: "g1-v2" });
    const { ctx } = makeCtx({ view: "revision", round: "r1" });
    const root = await renderRevision(ctx);

    const editor = root.querySelector(".guideline-editor") as HTMLTextAreaElement;
    expect(editor.value).toBe(guideline1.body);
    editor.value = "split conjunctions; keep conditions attached";
    (root.querySelector(".save-guideline") as HTMLElement).click();
    await flush();

    const puts = mock.callsTo("PUT /guidelines/g1-v2");
    expect(puts).toHaveLength(1);
    expect(puts[0].body?.version).toBe(guideline1.version + 1);
    expect(puts[0].body?.body).toBe("split conjunctions; keep conditions attached");
    expect(root.querySelector(".save-note")?.textContent).toContain("g1-v2");
  });

  it("keeps the draft buffer across renders and while typing", async () => {
    const { ctx } = makeCtx({ view: "revision", round: "r1", draft: "draft text" });
    const root = await renderRevision(ctx);
    const editor = root.querySelector(".guideline-editor") as HTMLTextAreaElement;
    expect(editor.value).toBe("draft text");
    editor.value = "draft text, extended";
    editor.dispatchEvent(new Event("input"));
    expect(ctx.state.draft).toBe("draft text, extended");
  });

  it("opens a follow-up round under the active guideline", async () => {
    mock.route("PUT /rounds/r1-next", { id: "r1-next" });
    const { ctx } = makeCtx({ view: "revision", round: "r1" });
    const root = await renderRevision(ctx);
    (root.querySelector(".create-round") as HTMLElement).click();
    await flush();

    const puts = mock.callsTo("PUT /rounds/r1-next");
    expect(puts).toHaveLength(1);
    expect(puts[0].body).toEqual({
      id: "r1-next",
      guideline_version_id: guideline1.id,
      annotation_ids: [],
      notes: "follow-up of r1",
    });
  });

  it("plots one convergence point per guideline version, values intact", async () => {
    const { ctx } = makeCtx({ view: "revision", round: "r1" });
    const root = await renderRevision(ctx);
    const points = Array.from(root.querySelectorAll(".conv-point"));
    expect(points).toHaveLength(convergencePoints.length);
    points.forEach((point, i) => {
      expect(point.getAttribute("data-version")).toBe(
        convergencePoints[i].guideline_version_id,
      );
      expect(point.getAttribute("data-mean")).toBe(
        String(convergencePoints[i].mean_iaa),
      );
    });
  });
});
