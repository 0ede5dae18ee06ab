import { describe, expect, it } from "vitest";

import { AlternatingPlayback } from "../src/player.js";
import type { PlaybackState } from "../src/types.js";
import { FakeAudioDeck, instantDelay } from "./fakes.js";

const clip = () => new Blob(["x"]);

describe("AlternatingPlayback", () => {
  it("plays A fully, then the gap, then B fully", async () => {
    const deck = new FakeAudioDeck();
    const gaps: number[] = [];
    const playback = new AlternatingPlayback(deck.factory, 400, (ms) => {
      gaps.push(ms);
      return Promise.resolve();
    });
    const states: Array<[number, PlaybackState]> = [];
    const completed = await playback.playPair([clip(), clip()], (i, s) =>
      states.push([i, s]),
    );
    expect(completed).toBe(true);
    expect(deck.playOrder()).toEqual([0, 1]);
    expect(gaps).toEqual([400]);
    expect(states).toEqual([
      [0, "playing"],
      [0, "played"],
      [1, "playing"],
      [1, "played"],
    ]);
  });

  it("never plays both at once", async () => {
    const deck = new FakeAudioDeck();
    const playback = new AlternatingPlayback(deck.factory, 0, instantDelay);
    let maxConcurrent = 0;
    await playback.playPair([clip(), clip()], () => {
      maxConcurrent = Math.max(maxConcurrent, deck.playing.size);
    });
    expect(maxConcurrent).toBeLessThanOrEqual(1);
  });

  it("stop() cancels the rest of the sequence", async () => {
    const deck = new FakeAudioDeck(false); // clips never end on their own
    const playback = new AlternatingPlayback(deck.factory, 0, instantDelay);
    const sequence = playback.playPair([clip(), clip()], () => {});
    await Promise.resolve();
    playback.stop();
    const completed = await sequence;
    expect(completed).toBe(false);
    expect(deck.playOrder()).toEqual([0]); // B never started
  });
});
