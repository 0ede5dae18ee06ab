import type { AudioHandle } from "../src/player.js";

export interface PlaybackLogEntry {
  voiceIndex: number;
  event: "play" | "stop" | "ended";
}

/**
 * Audio test double. `autoEnd` fires the ended event on the next macrotask,
 * which is what lets the alternating sequence run to completion headlessly.
 */
export class FakeAudioDeck {
  log: PlaybackLogEntry[] = [];
  playing: Set<number> = new Set();

  constructor(private readonly autoEnd: boolean = true) {}

  factory = (_clip: Blob, voiceIndex: number): AudioHandle => {
    let endedCallback: (() => void) | null = null;
    return {
      play: () => {
        this.log.push({ voiceIndex, event: "play" });
        this.playing.add(voiceIndex);
        if (this.autoEnd) {
          setTimeout(() => {
            if (this.playing.delete(voiceIndex)) {
              this.log.push({ voiceIndex, event: "ended" });
              endedCallback?.();
            }
          }, 0);
        }
      },
      stop: () => {
        if (this.playing.delete(voiceIndex)) {
          this.log.push({ voiceIndex, event: "stop" });
        }
      },
      onEnded: (callback) => {
        endedCallback = callback;
      },
    };
  };

  playOrder(): number[] {
    return this.log.filter((e) => e.event === "play").map((e) => e.voiceIndex);
  }
}

export const instantDelay = () => Promise.resolve();
