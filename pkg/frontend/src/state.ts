import type { AppState } from "./types.js";

export const initialState: AppState = {
  phase: "idle",
  sessionId: null,
  generation: 0,
  voices: [],
  error: null,
  announcement: "",
};

export type Listener = (state: AppState) => void;

/** Tiny observable state container; the view re-renders on every update. */
export class Store {
  private state: AppState = initialState;
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  update(patch: Partial<AppState>): AppState {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    listener(this.state);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }
}
