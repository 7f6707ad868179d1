/** ViewState and its URL-hash codec.
 *
 * Every piece of view selection lives in the hash, so any screen the user
 * looks at can be bookmarked or shared and reloading restores it exactly.
 */

export const VIEW_NAMES = [
  "compare",
  "heatmap",
  "histogram",
  "graphs",
  "branching",
  "revision",
] as const;

export type ViewName = (typeof VIEW_NAMES)[number];

export interface ViewState {
  view: ViewName;
  document: string | null;
  round: string | null;
  /** annotator pair, the unit heatmap cells navigate by */
  pair: [string, string] | null;
  threshold: number;
  fact: number | null;
  cluster: number | null;
  /** guideline draft buffer, preserved across navigation */
  draft: string;
}

export const DEFAULT_THRESHOLD = 0.7;

export function defaultState(): ViewState {
  return {
    view: "heatmap",
    document: null,
    round: null,
    pair: null,
    threshold: DEFAULT_THRESHOLD,
    fact: null,
    cluster: null,
    draft: "",
  };
}

function clampThreshold(value: number): number {
  if (!Number.isFinite(value)) return DEFAULT_THRESHOLD;
  return Math.min(1, Math.max(0, value));
}

/** Serialize to a hash fragment like `#/compare?round=r1&a=p1&b=p2`. */
export function encodeState(state: ViewState): string {
  const params = new URLSearchParams();
  if (state.document !== null) params.set("document", state.document);
  if (state.round !== null) params.set("round", state.round);
  if (state.pair !== null) {
    params.set("a", state.pair[0]);
    params.set("b", state.pair[1]);
  }
  if (state.threshold !== DEFAULT_THRESHOLD) {
    params.set("threshold", String(state.threshold));
  }
  if (state.fact !== null) params.set("fact", String(state.fact));
  if (state.cluster !== null) params.set("cluster", String(state.cluster));
  if (state.draft !== "") params.set("draft", state.draft);
  const tail = params.toString();
  return `#/${state.view}${tail ? `?${tail}` : ""}`;
}

/** Parse a hash fragment back into a ViewState; unknown content falls back
 * to defaults rather than failing, so stale links still open the app. */
export function decodeState(hash: string): ViewState {
  const state = defaultState();
  const trimmed = hash.replace(/^#\/?/, "");
  if (trimmed === "") return state;
  const queryAt = trimmed.indexOf("?");
  const viewName = queryAt === -1 ? trimmed : trimmed.slice(0, queryAt);
  if ((VIEW_NAMES as readonly string[]).includes(viewName)) {
    state.view = viewName as ViewName;
  }
  const params = new URLSearchParams(queryAt === -1 ? "" : trimmed.slice(queryAt + 1));
  state.document = params.get("document");
  state.round = params.get("round");
  const a = params.get("a");
  const b = params.get("b");
  state.pair = a !== null && b !== null ? [a, b] : null;
  const threshold = params.get("threshold");
  state.threshold =
    threshold === null ? DEFAULT_THRESHOLD : clampThreshold(Number(threshold));
  const fact = params.get("fact");
  state.fact = fact === null ? null : Math.trunc(Number(fact)) || 0;
  const cluster = params.get("cluster");
  state.cluster = cluster === null ? null : Math.trunc(Number(cluster)) || 0;
  state.draft = params.get("draft") ?? "";
  return state;
}
