/** Pairwise comparison: document text with both annotators' highlights,
 * side-by-side fact lists, and the threshold slider.
 *
 * The agreement number always comes from the match response. Moving the
 * slider issues a fresh match request instead of re-filtering locally, so
 * the server stays the only place Jaccard is computed.
 */

import type { AnnotationRecord, MatchResult } from "../api.js";
import type { AppContext } from "../context.js";
import { el } from "../dom.js";
import { segment, type AnchorSpan } from "../highlight.js";
import { DEFAULT_THRESHOLD } from "../state.js";
import { annotatorColor } from "../theme.js";

/** Sentinel fact index marking entity spans in the combined segmentation. */
const ENTITY = -1;

function formatNumber(value: number): string {
  return Number.isInteger(value) ? String(value) : value.toFixed(3);
}

export async function renderCompare(ctx: AppContext): Promise<HTMLElement> {
  const { api, state } = ctx;
  if (state.round === null || state.pair === null) {
    return el(
      "div",
      { class: "empty-state" },
      "Pick a heatmap cell, or put round, a and b into the URL, " +
        "to open a pairwise comparison.",
    );
  }

  const round = await api.getRound(state.round);
  const annotations = await Promise.all(
    round.annotation_ids.map((id) => api.getAnnotation(id)),
  );
  const inScope =
    state.document === null
      ? annotations
      : annotations.filter((ann) => ann.document_id === state.document);
  const [idA, idB] = state.pair;
  const annA = inScope.find((ann) => ann.annotator_id === idA);
  const annB =
    inScope.find(
      (ann) =>
        ann.annotator_id === idB &&
        (annA === undefined || ann.document_id === annA.document_id),
    ) ?? inScope.find((ann) => ann.annotator_id === idB);
  if (annA === undefined || annB === undefined) {
    const missing = annA === undefined ? idA : idB;
    return el(
      "div",
      { class: "error-state" },
      `annotator '${missing}' has no annotation in round '${round.id}'`,
    );
  }

  const doc = await api.getDocument(annA.document_id);
  const requested =
    state.threshold === DEFAULT_THRESHOLD ? undefined : state.threshold;
  const [match, entitySpans] = await Promise.all([
    api.match(annA.id, annB.id, requested),
    api.sourceGraph(doc.id).then(
      (graph) => graph.nodes.flatMap((node) => node.spans),
      () => [] as [number, number][],
    ),
  ]);

  const root = el("section", { class: "view compare-view" });
  root.append(
    el("h2", null, `${idA} vs ${idB} on ${doc.id}`),
    renderControls(ctx, match),
    renderText(doc.text, annA, annB, entitySpans),
    el(
      "div",
      { class: "fact-columns" },
      renderFactColumn(root, "a", idA, annA, match),
      renderFactColumn(root, "b", idB, annB, match),
    ),
  );
  return root;
}

function renderControls(ctx: AppContext, match: MatchResult): HTMLElement {
  const slider = el("input", {
    type: "range",
    min: "0",
    max: "1",
    step: "0.01",
    value: String(match.threshold),
    class: "threshold-slider",
  });
  const readout = el(
    "span",
    { class: "threshold-value", "data-value": String(match.threshold) },
    formatNumber(match.threshold),
  );
  slider.addEventListener("input", () => {
    readout.textContent = slider.value;
  });
  slider.addEventListener("change", () => {
    void ctx.navigate({ threshold: Number(slider.value) });
  });
  return el(
    "div",
    { class: "match-controls" },
    el("label", { class: "slider-label" }, "threshold ", slider, " ", readout),
    el(
      "span",
      { class: "stat" },
      "IAA ",
      el(
        "strong",
        { class: "iaa", "data-value": String(match.iaa) },
        formatNumber(match.iaa),
      ),
    ),
    el("span", { class: "stat" }, `${match.matches.length} matched pair(s)`),
  );
}

/** One text panel carrying both annotators' highlights.
 *
 * Fact indices for side B are shifted past side A's so a single
 * segmentation pass can cut the text at every anchor boundary.
 */
function renderText(
  text: string,
  annA: AnnotationRecord,
  annB: AnnotationRecord,
  entitySpans: [number, number][],
): HTMLElement {
  const offset = annA.facts.length;
  const spans: AnchorSpan[] = [];
  annA.facts.forEach((fact, i) => {
    for (const [start, end] of fact.anchors) {
      spans.push({ start, end, fact: i });
    }
  });
  annB.facts.forEach((fact, j) => {
    for (const [start, end] of fact.anchors) {
      spans.push({ start, end, fact: offset + j });
    }
  });
  for (const [start, end] of entitySpans) {
    spans.push({ start, end, fact: ENTITY });
  }

  const panel = el("div", { class: "doc-text" });
  for (const part of segment(text.length, spans)) {
    const classes = ["seg"];
    const aFacts = part.facts.filter((f) => f >= 0 && f < offset);
    const bFacts = part.facts.filter((f) => f >= offset);
    if (aFacts.length > 0) {
      classes.push("side-a", ...aFacts.map((i) => `seg-a-${i}`));
    }
    if (bFacts.length > 0) {
      classes.push("side-b", ...bFacts.map((f) => `seg-b-${f - offset}`));
    }
    if (part.facts.includes(ENTITY)) {
      classes.push("entity");
    }
    panel.append(
      el(
        "span",
        {
          class: classes.join(" "),
          "data-start": String(part.start),
          "data-end": String(part.end),
        },
        text.slice(part.start, part.end),
      ),
    );
  }
  return panel;
}

function renderFactColumn(
  root: HTMLElement,
  side: "a" | "b",
  annotatorId: string,
  ann: AnnotationRecord,
  match: MatchResult,
): HTMLElement {
  const other = side === "a" ? "b" : "a";
  const matched = new Map<number, number>(
    match.matches.map(([i, j]) => (side === "a" ? [i, j] : [j, i])),
  );

  const list = el("ul", { class: "fact-list" });
  ann.facts.forEach((fact, index) => {
    const counterpart = matched.get(index);
    const item = el(
      "li",
      {
        class: counterpart === undefined ? "fact-item" : "fact-item matched",
        id: `fact-${side}-${index}`,
        "data-side": side,
        "data-fact": String(index),
      },
      el("span", {
        class: "chip",
        style: `background:${annotatorColor(side === "a" ? 0 : 1)}`,
      }),
      fact.text,
      fact.anchors.length === 0 ? el("span", { class: "badge" }, "no anchor") : null,
    );
    item.addEventListener("mouseenter", () => {
      for (const node of root.querySelectorAll(`.seg-${side}-${index}`)) {
        node.classList.add("emphasis");
      }
      if (counterpart !== undefined) {
        for (const node of root.querySelectorAll(`.seg-${other}-${counterpart}`)) {
          node.classList.add("emphasis");
        }
        root
          .querySelector(`#fact-${other}-${counterpart}`)
          ?.classList.add("matched-emphasis");
      }
    });
    item.addEventListener("mouseleave", () => {
      for (const node of root.querySelectorAll(".emphasis, .matched-emphasis")) {
        node.classList.remove("emphasis");
        node.classList.remove("matched-emphasis");
      }
    });
    list.append(item);
  });

  return el(
    "div",
    { class: "fact-col", "data-side": side },
    el("h3", null, `${annotatorId} (${ann.id})`),
    list,
  );
}
