import { describe, expect, it } from "vitest";

import { Store, initialState } from "../src/state.js";
import { bothClipsReady, type VoiceView } from "../src/types.js";

const voice = (clip: Blob | null): VoiceView => ({
  individual_id: "v",
  audio_url: "/audio/v",
  playback_state: "idle",
  clip,
});

describe("Store", () => {
  it("starts idle at generation 0", () => {
    expect(new Store().get()).toEqual(initialState);
  });

  it("notifies subscribers on update and supports unsubscribe", () => {
    const store = new Store();
    const seen: string[] = [];
    const unsubscribe = store.subscribe((s) => seen.push(s.phase));
    store.update({ phase: "creating" });
    unsubscribe();
    store.update({ phase: "ready" });
    expect(seen).toEqual(["idle", "creating"]);
  });

  it("updates are merges, not replacements", () => {
    const store = new Store();
    store.update({ generation: 4 });
    store.update({ phase: "ready" });
    expect(store.get().generation).toBe(4);
    expect(store.get().phase).toBe("ready");
  });
});

describe("bothClipsReady", () => {
  it("requires exactly two fetched clips", () => {
    expect(bothClipsReady([])).toBe(false);
    expect(bothClipsReady([voice(new Blob()), voice(null)])).toBe(false);
    expect(bothClipsReady([voice(new Blob()), voice(new Blob())])).toBe(true);
  });
});
