/** Guideline-revision workflow: edit the guideline into a new version,
 * open a follow-up round, review majority-vote consensus facts as
 * accept/reject suggestions, and keep a working annotation draft.
 *
 * The draft buffer lives in the URL state so it survives navigation; the
 * accepted fact list lives in the session store until saved as an
 * annotation record.
 */

import type { ConsensusFact, GuidelineRecord, RoundRecord } from "../api.js";
import { ApiError } from "../api.js";
import { isoNow, type AppContext } from "../context.js";
import { el, svg } from "../dom.js";

function errorText(error: unknown): string {
  return error instanceof ApiError ? error.message : "request failed";
}

function guidelineEditor(
  ctx: AppContext,
  guideline: GuidelineRecord,
  onSaved: (id: string) => void,
): HTMLElement {
  const editor = el("textarea", { class: "guideline-editor", rows: "8" });
  editor.value = ctx.state.draft !== "" ? ctx.state.draft : guideline.body;
  editor.addEventListener("input", () => {
    ctx.stash({ draft: editor.value });
  });

  const idInput = el("input", {
    class: "new-guideline-id",
    type: "text",
    value: `${guideline.id}-v${guideline.version + 1}`,
  });
  const note = el("span", { class: "save-note" });
  const save = el("button", { class: "save-guideline", type: "button" }, "save as new version");
  save.addEventListener("click", async () => {
    const record: GuidelineRecord = {
      id: idInput.value,
      version: guideline.version + 1,
      body: editor.value,
      created_at: isoNow(),
    };
    try {
      await ctx.api.putGuideline(record);
      note.textContent = `saved ${record.id} (version ${record.version})`;
      onSaved(record.id);
    } catch (error) {
      note.textContent = errorText(error);
    }
  });

  return el(
    "div",
    { class: "guideline-panel" },
    el("h3", null, `guideline ${guideline.id} (version ${guideline.version})`),
    editor,
    el("div", { class: "editor-row" }, idInput, save, note),
  );
}

function roundCreator(
  ctx: AppContext,
  round: RoundRecord,
  guidelineIdFor: () => string,
): HTMLElement {
  const idInput = el("input", {
    class: "new-round-id",
    type: "text",
    value: `${round.id}-next`,
  });
  const note = el("span", { class: "round-note" });
  const create = el("button", { class: "create-round", type: "button" }, "open round");
  create.addEventListener("click", async () => {
    const record: RoundRecord = {
      id: idInput.value,
      guideline_version_id: guidelineIdFor(),
      annotation_ids: [],
      notes: `follow-up of ${round.id}`,
    };
    try {
      await ctx.api.putRound(record);
      note.textContent = `opened round ${record.id} under ${record.guideline_version_id}`;
    } catch (error) {
      note.textContent = errorText(error);
    }
  });
  return el(
    "div",
    { class: "round-panel" },
    el("h3", null, "next round"),
    el("div", { class: "editor-row" }, idInput, create, note),
  );
}

function suggestionList(
  ctx: AppContext,
  suggestions: ConsensusFact[],
  onAccept: () => void,
): HTMLElement {
  const list = el("div", { class: "suggestions" });
  if (suggestions.length === 0) {
    list.append(el("div", { class: "empty-state" }, "no consensus facts"));
    return list;
  }
  for (const suggestion of suggestions) {
    const accept = el("button", { class: "accept", type: "button" }, "accept");
    const reject = el("button", { class: "reject", type: "button" }, "reject");
    const item = el(
      "div",
      { class: "suggestion", "data-text": suggestion.text },
      el("span", { class: "suggestion-text" }, suggestion.text),
      el(
        "span",
        { class: "badge", title: suggestion.annotator_ids.join(", ") },
        `${suggestion.cluster_size} annotator(s)`,
      ),
      accept,
      reject,
    );
    accept.addEventListener("click", () => {
      ctx.session.draftFacts.push(suggestion.text);
      item.classList.add("accepted");
      accept.disabled = true;
      onAccept();
    });
    reject.addEventListener("click", () => {
      item.remove();
    });
    list.append(item);
  }
  return list;
}

function draftPanel(
  ctx: AppContext,
  round: RoundRecord | null,
  guidelineIdFor: () => string,
): { root: HTMLElement; refresh: () => void } {
  const list = el("ul", { class: "draft-facts" });
  const refresh = (): void => {
    list.replaceChildren();
    ctx.session.draftFacts.forEach((text, index) => {
      const drop = el("button", { class: "drop", type: "button" }, "x");
      drop.addEventListener("click", () => {
        ctx.session.draftFacts.splice(index, 1);
        refresh();
      });
      list.append(el("li", { class: "draft-fact" }, text, drop));
    });
  };
  refresh();

  const annotationId = el("input", { class: "draft-annotation-id", type: "text", placeholder: "annotation id" });
  const annotatorId = el("input", { class: "draft-annotator-id", type: "text", placeholder: "annotator id" });
  const documentId = el("input", {
    class: "draft-document-id",
    type: "text",
    placeholder: "document id",
    value: ctx.state.document ?? "",
  });
  const note = el("span", { class: "annotation-note" });
  const save = el("button", { class: "save-annotation", type: "button" }, "save annotation");
  save.addEventListener("click", async () => {
    if (round === null) {
      note.textContent = "select a round first";
      return;
    }
    const record = {
      id: annotationId.value,
      document_id: documentId.value,
      annotator_id: annotatorId.value,
      guideline_version_id: guidelineIdFor(),
      facts: ctx.session.draftFacts.map((text) => ({ text, anchors: [] as [number, number][] })),
      created_at: isoNow(),
    };
    try {
      await ctx.api.putAnnotation(record);
      if (!round.annotation_ids.includes(record.id)) {
        await ctx.api.putRound({
          ...round,
          annotation_ids: [...round.annotation_ids, record.id],
        });
      }
      note.textContent = `saved ${record.id} into round ${round.id}`;
    } catch (error) {
      note.textContent = errorText(error);
    }
  });

  const root = el(
    "div",
    { class: "draft-panel" },
    el("h3", null, "annotation draft"),
    list,
    el("div", { class: "editor-row" }, annotationId, annotatorId, documentId, save, note),
  );
  return { root, refresh };
}

function convergenceChart(
  points: { guideline_version_id: string; mean_iaa: number; median_iaa: number; pair_count: number }[],
): HTMLElement {
  const wrap = el("div", { class: "convergence" }, el("h3", null, "convergence"));
  if (points.length === 0) {
    wrap.append(el("div", { class: "empty-state" }, "no finished rounds yet"));
    return wrap;
  }
  const width = 360;
  const height = 140;
  const pad = 24;
  const x = (index: number): number =>
    points.length === 1
      ? width / 2
      : pad + (index * (width - 2 * pad)) / (points.length - 1);
  const y = (value: number): number => pad + (1 - value) * (height - 2 * pad);

  const chart = svg("svg", {
    class: "conv-chart",
    viewBox: `0 0 ${width} ${height}`,
    width: String(width),
    height: String(height),
  });
  chart.append(
    svg("polyline", {
      class: "conv-line",
      fill: "none",
      points: points.map((p, i) => `${x(i)},${y(p.mean_iaa)}`).join(" "),
    }),
  );
  points.forEach((p, i) => {
    chart.append(
      svg(
        "circle",
        {
          class: "conv-point",
          r: "4",
          cx: String(x(i)),
          cy: String(y(p.mean_iaa)),
          "data-version": p.guideline_version_id,
          "data-mean": String(p.mean_iaa),
        },
        svg(
          "title",
          null,
          `${p.guideline_version_id}: mean ${p.mean_iaa}, ` +
            `median ${p.median_iaa}, ${p.pair_count} pair(s)`,
        ),
      ),
      svg(
        "text",
        {
          class: "conv-label",
          "text-anchor": "middle",
          x: String(x(i)),
          y: String(height - 4),
        },
        p.guideline_version_id,
      ),
    );
  });
  wrap.append(chart);
  return wrap;
}

export async function renderRevision(ctx: AppContext): Promise<HTMLElement> {
  const { api, state } = ctx;
  const root = el("section", { class: "view revision-view" });
  root.append(el("h2", null, "guideline revision"));

  let round: RoundRecord | null = null;
  let guideline: GuidelineRecord | null = null;
  if (state.round !== null) {
    round = await api.getRound(state.round);
    guideline = await api.getGuideline(round.guideline_version_id);
  }

  let activeGuidelineId = guideline === null ? "" : guideline.id;
  const guidelineIdFor = (): string => activeGuidelineId;

  if (round !== null && guideline !== null) {
    root.append(
      guidelineEditor(ctx, guideline, (id) => {
        activeGuidelineId = id;
      }),
      roundCreator(ctx, round, guidelineIdFor),
    );
  } else {
    root.append(
      el(
        "div",
        { class: "empty-state" },
        "Set a round in the URL (e.g. #/revision?round=r1) to edit its guideline.",
      ),
    );
  }

  const draft = draftPanel(ctx, round, guidelineIdFor);

  if (round !== null) {
    let suggestions: ConsensusFact[] = [];
    let failure: string | null = null;
    try {
      suggestions = await api.consensus(round.id);
    } catch (error) {
      failure = errorText(error);
    }
    root.append(el("h3", null, "consensus suggestions"));
    root.append(
      failure === null
        ? suggestionList(ctx, suggestions, draft.refresh)
        : el("div", { class: "error-state" }, failure),
    );
  }

  root.append(draft.root);
  root.append(convergenceChart(await api.convergence()));
  return root;
}
