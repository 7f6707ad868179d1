/** Branching-logic explorer: parse a sentence into its condition and
 * conjunction tree, walk the decomposition variants, and adopt one as the
 * working fact draft.
 */

import type { Decomposition, LogicTree, ParseResponse } from "../api.js";
import { ApiError } from "../api.js";
import type { AppContext } from "../context.js";
import { el } from "../dom.js";

function treeLabel(tree: LogicTree): string {
  switch (tree.type) {
    case "leaf":
      return tree.text;
    case "and":
      return `all of (${tree.cues.join(", ")})`;
    case "or":
      return `one of (${tree.cues.join(", ")})`;
    case "cond":
      return `condition (${tree.cue})`;
  }
}

export function renderTree(tree: LogicTree): HTMLElement {
  if (tree.type === "leaf") {
    return el(
      "div",
      { class: "tree-node", "data-type": "leaf" },
      el("span", { class: "leaf-text" }, tree.text),
    );
  }
  const body = el("div", { class: "tree-children" });
  if (tree.type === "cond") {
    body.append(
      el("div", { class: "tree-role" }, "if:"),
      renderTree(tree.antecedent),
      el("div", { class: "tree-role" }, "then:"),
      renderTree(tree.consequent),
    );
  } else {
    for (const child of tree.children) {
      body.append(renderTree(child));
    }
  }
  return el(
    "details",
    { class: "tree-node", "data-type": tree.type, open: "" },
    el("summary", null, treeLabel(tree)),
    body,
  );
}

function renderVariants(ctx: AppContext, variants: Decomposition[]): HTMLElement {
  const tabs = el("div", { class: "variant-tabs" });
  const panel = el("div", { class: "variant-panel" });
  const note = el("div", { class: "adopt-note" });

  const show = (index: number): void => {
    const variant = variants[index];
    tabs.querySelectorAll("button").forEach((button, i) => {
      button.classList.toggle("active", i === index);
    });
    const facts = el("ol", { class: "variant-facts" });
    for (const fact of variant.facts) {
      facts.append(el("li", { class: "variant-fact" }, fact));
    }
    const adopt = el("button", { class: "adopt", type: "button" }, "adopt");
    adopt.addEventListener("click", () => {
      ctx.session.draftFacts = [...variant.facts];
      note.textContent =
        `took ${variant.facts.length} fact(s) into the annotation draft ` +
        "(see the revision view)";
    });
    panel.replaceChildren(facts, adopt);
  };

  variants.forEach((variant, index) => {
    const tab = el(
      "button",
      { class: "variant-tab", type: "button", "data-strategy": variant.strategy },
      variant.strategy.replace("_", " "),
    );
    tab.addEventListener("click", () => show(index));
    tabs.append(tab);
  });
  if (variants.length > 0) {
    show(0);
  }
  return el("div", { class: "variants" }, tabs, panel, note);
}

function renderParsed(ctx: AppContext, parsed: ParseResponse): HTMLElement {
  return el(
    "div",
    { class: "parse-result" },
    el("h3", null, "structure"),
    renderTree(parsed.tree),
    el("h3", null, "decomposition variants"),
    renderVariants(ctx, parsed.decompositions),
  );
}

export async function renderBranching(ctx: AppContext): Promise<HTMLElement> {
  const input = el("textarea", {
    class: "sentence-input",
    rows: "3",
    placeholder: "If you are a resident, you need permit A and permit B.",
  });
  const language = el(
    "select",
    { class: "language-select" },
    el("option", { value: "en" }, "en"),
    el("option", { value: "de" }, "de"),
  );
  const button = el("button", { class: "parse", type: "button" }, "parse");
  const output = el("div", { class: "parse-output" });

  button.addEventListener("click", async () => {
    const sentence = input.value.trim();
    if (sentence === "") {
      return;
    }
    try {
      const parsed = await ctx.api.parse(sentence, language.value);
      output.replaceChildren(renderParsed(ctx, parsed));
    } catch (error) {
      const message =
        error instanceof ApiError ? error.message : "parse request failed";
      output.replaceChildren(el("div", { class: "error-state" }, message));
    }
  });

  return el(
    "section",
    { class: "view branching-view" },
    el("h2", null, "branching logic"),
    el("div", { class: "parse-controls" }, input, language, button),
    output,
  );
}
