/** Application shell: hash router, nav bar, view dispatch.
 *
 * Renders are serialized on one promise chain so a fast sequence of
 * navigations never interleaves half-built views; tests await settle().
 */

import { ApiClient, ApiError } from "./api.js";
import type { AppContext, SessionStore } from "./context.js";
import { clear, el } from "./dom.js";
import {
  decodeState,
  encodeState,
  VIEW_NAMES,
  type ViewName,
  type ViewState,
} from "./state.js";
import { renderBranching } from "./views/branching.js";
import { renderGraphs } from "./views/graphs.js";
import { renderHeatmap } from "./views/heatmap.js";
import { renderHistogram } from "./views/histogram.js";
import { renderRevision } from "./views/revision.js";
import { renderCompare } from "./views/text.js";

const RENDERERS: Record<ViewName, (ctx: AppContext) => Promise<HTMLElement>> = {
  compare: renderCompare,
  heatmap: renderHeatmap,
  histogram: renderHistogram,
  graphs: renderGraphs,
  branching: renderBranching,
  revision: renderRevision,
};

export class App {
  state: ViewState;
  readonly session: SessionStore = { draftFacts: [] };
  private pending: Promise<void> = Promise.resolve();

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
  ) {
    this.state = decodeState(window.location.hash);
    window.addEventListener("hashchange", () => {
      this.state = decodeState(window.location.hash);
      void this.schedule();
    });
  }

  start(): Promise<void> {
    return this.schedule();
  }

  /** Patch the state, record it in the URL, re-render. */
  navigate = (patch: Partial<ViewState>): Promise<void> => {
    this.state = { ...this.state, ...patch };
    const hash = encodeState(this.state);
    if (window.location.hash !== hash) {
      window.history.pushState(null, "", hash);
    }
    return this.schedule();
  };

  /** Patch the state and URL without re-rendering (text buffers). */
  stash = (patch: Partial<ViewState>): void => {
    this.state = { ...this.state, ...patch };
    window.history.replaceState(null, "", encodeState(this.state));
  };

  /** Resolves when the most recently requested render is on screen. */
  settle(): Promise<void> {
    return this.pending;
  }

  private schedule(): Promise<void> {
    this.pending = this.pending.then(() => this.render());
    return this.pending;
  }

  private async render(): Promise<void> {
    const ctx: AppContext = {
      api: this.api,
      state: this.state,
      navigate: this.navigate,
      stash: this.stash,
      session: this.session,
    };
    let body: HTMLElement;
    try {
      body = await RENDERERS[this.state.view](ctx);
    } catch (error) {
      const message =
        error instanceof ApiError
          ? `${error.status}: ${error.message}`
          : String(error);
      body = el("div", { class: "error-state" }, message);
    }
    clear(this.root);
    this.root.append(this.navBar(), body);
  }

  private navBar(): HTMLElement {
    const nav = el(
      "nav",
      { class: "topbar" },
      el("span", { class: "brand" }, "factalign"),
    );
    for (const view of VIEW_NAMES) {
      const link = el(
        "a",
        {
          class: view === this.state.view ? "nav-link active" : "nav-link",
          href: encodeState({ ...this.state, view }),
        },
        view,
      );
      link.addEventListener("click", (event) => {
        event.preventDefault();
        void this.navigate({ view });
      });
      nav.append(link);
    }
    return nav;
  }
}

export function mountApp(
  root: HTMLElement,
  api: ApiClient = new ApiClient(),
): App {
  const app = new App(root, api);
  void app.start();
  return app;
}
