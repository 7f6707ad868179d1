/** Fact-count histogram: one bar per annotation, grouped by document,
 * colored by annotator, plus the per-annotator aggregate table.
 */

import type { HistogramReport } from "../api.js";
import type { AppContext } from "../context.js";
import { el } from "../dom.js";
import { annotatorColor, HISTOGRAM_BAR_UNIT } from "../theme.js";

function annotatorOrder(report: HistogramReport): string[] {
  const seen: string[] = [];
  for (const row of report.counts) {
    if (!seen.includes(row.annotator_id)) {
      seen.push(row.annotator_id);
    }
  }
  return seen;
}

export async function renderHistogram(ctx: AppContext): Promise<HTMLElement> {
  const report = await ctx.api.histogram(ctx.state.round ?? undefined);
  const root = el("section", { class: "view histogram-view" });
  root.append(el("h2", null, "facts per annotation"));

  if (report.counts.length === 0) {
    root.append(
      el("div", { class: "empty-state" }, "No annotations in this scope."),
    );
    return root;
  }

  const order = annotatorOrder(report);
  const documents: string[] = [];
  for (const row of report.counts) {
    if (!documents.includes(row.document_id)) {
      documents.push(row.document_id);
    }
  }

  const chart = el("div", { class: "histogram" });
  for (const docId of documents) {
    const group = el("div", { class: "bar-group", "data-document": docId });
    for (const row of report.counts) {
      if (row.document_id !== docId) {
        continue;
      }
      group.append(
        el(
          "div",
          {
            class: "bar",
            "data-count": String(row.count),
            "data-annotator": row.annotator_id,
            "data-document": row.document_id,
            style:
              `height:${row.count * HISTOGRAM_BAR_UNIT}px;` +
              `background:${annotatorColor(order.indexOf(row.annotator_id))}`,
            title: `${row.annotator_id} on ${row.document_id}: ${row.count}`,
          },
          String(row.count),
        ),
      );
    }
    group.append(el("div", { class: "group-label" }, docId));
    chart.append(group);
  }
  root.append(chart);

  const legend = el("div", { class: "annotator-legend" });
  order.forEach((id, index) => {
    legend.append(
      el(
        "span",
        { class: "legend-item" },
        el("span", {
          class: "chip",
          style: `background:${annotatorColor(index)}`,
        }),
        id,
      ),
    );
  });
  root.append(legend);

  const table = el(
    "table",
    { class: "aggregates" },
    el(
      "thead",
      null,
      el(
        "tr",
        null,
        el("th", null, "annotator"),
        el("th", null, "mean"),
        el("th", null, "median"),
        el("th", null, "min"),
        el("th", null, "max"),
      ),
    ),
  );
  const body = el("tbody", null);
  for (const agg of report.aggregates) {
    body.append(
      el(
        "tr",
        null,
        el("th", { scope: "row" }, agg.annotator_id),
        el("td", { "data-value": String(agg.mean) }, agg.mean.toFixed(2)),
        el("td", { "data-value": String(agg.median) }, agg.median.toFixed(2)),
        el("td", { "data-value": String(agg.min) }, String(agg.min)),
        el("td", { "data-value": String(agg.max) }, String(agg.max)),
      ),
    );
  }
  table.append(body);
  root.append(table);
  return root;
}
