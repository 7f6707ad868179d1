/** Pairwise-agreement matrix. Cell color maps the value linearly onto the
 * agreement ramp; clicking a cell opens the pairwise comparison for those
 * two annotators.
 */

import type { AppContext } from "../context.js";
import { el } from "../dom.js";
import { agreementColor } from "../theme.js";

function formatCell(value: number): string {
  return Number.isInteger(value) ? value.toFixed(1) : value.toFixed(2);
}

export async function renderHeatmap(ctx: AppContext): Promise<HTMLElement> {
  const { api, state } = ctx;
  if (state.round === null && state.document === null) {
    return el(
      "div",
      { class: "empty-state" },
      "Set a round or document in the URL (e.g. #/heatmap?round=r1) " +
        "to see pairwise agreement.",
    );
  }
  const matrix = await api.heatmap({
    document: state.document ?? undefined,
    round: state.round ?? undefined,
  });

  const header = el("tr", null, el("th", null, ""));
  for (const id of matrix.annotator_ids) {
    header.append(el("th", { scope: "col" }, id));
  }
  const body = el("tbody", null);
  matrix.annotator_ids.forEach((rowId, i) => {
    const row = el("tr", null, el("th", { scope: "row" }, rowId));
    matrix.annotator_ids.forEach((colId, j) => {
      const value = matrix.values[i][j];
      const cell = el(
        "td",
        {
          class: i === j ? "cell diagonal" : "cell",
          "data-value": String(value),
          "data-row": rowId,
          "data-col": colId,
          style: `background:${agreementColor(value)}`,
          title: `${rowId} vs ${colId}: ${value}`,
        },
        formatCell(value),
      );
      if (i !== j) {
        cell.addEventListener("click", () => {
          void ctx.navigate({ view: "compare", pair: [rowId, colId] });
        });
      }
      row.append(cell);
    });
    body.append(row);
  });

  const legend = el("div", { class: "ramp-legend" });
  for (let step = 0; step <= 10; step += 1) {
    legend.append(
      el("span", {
        class: "ramp-step",
        style: `background:${agreementColor(step / 10)}`,
        title: (step / 10).toFixed(1),
      }),
    );
  }

  return el(
    "section",
    { class: "view heatmap-view" },
    el("h2", null, `agreement (${matrix.scope})`),
    el(
      "table",
      { class: "heatmap" },
      el("thead", null, header),
      body,
    ),
    el(
      "div",
      { class: "legend-row" },
      el("span", null, "0"),
      legend,
      el("span", null, "1"),
    ),
  );
}
