/** Shared context handed to every view renderer. */

import type { ApiClient } from "./api.js";
import type { ViewState } from "./state.js";

/** In-memory scratch space, intentionally not part of the URL. */
export interface SessionStore {
  /** Working fact list for the annotation draft panel. */
  draftFacts: string[];
}

export interface AppContext {
  api: ApiClient;
  state: ViewState;
  /** Update state and URL, then re-render the active view. */
  navigate(patch: Partial<ViewState>): Promise<void>;
  /** Update state and URL quietly (no re-render); used while typing
   * into the guideline draft so the buffer survives navigation. */
  stash(patch: Partial<ViewState>): void;
  session: SessionStore;
}

/** Timestamp in a form the service's ISO parser accepts. */
export function isoNow(): string {
  return new Date().toISOString().replace("Z", "+00:00");
}
