import type { PlaybackState } from "./types.js";

/** Minimal control surface over one playing clip. */
export interface AudioHandle {
  play(): void;
  stop(): void;
  onEnded(callback: () => void): void;
}

export type AudioFactory = (clip: Blob, voiceIndex: number) => AudioHandle;

/** Real backend: an HTMLAudioElement over an object URL. */
export function htmlAudioFactory(clip: Blob): AudioHandle {
  const url = URL.createObjectURL(clip);
  const element = new Audio(url);
  let ended: (() => void) | null = null;
  element.addEventListener("ended", () => {
    URL.revokeObjectURL(url);
    ended?.();
  });
  return {
    play: () => {
      void element.play();
    },
    stop: () => {
      element.pause();
      URL.revokeObjectURL(url);
    },
    onEnded: (callback) => {
      ended = callback;
    },
  };
}

export const PLAYBACK_GAP_MS = 400;

const sleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

export type PlaybackListener = (voiceIndex: number, state: PlaybackState) => void;

/**
 * Plays voice A fully, waits a fixed gap, then voice B fully.
 * At most one clip plays at a time; stop() cancels the whole sequence.
 */
export class AlternatingPlayback {
  private current: AudioHandle | null = null;
  private cancelled = false;
  private waker: (() => void) | null = null;

  constructor(
    private readonly factory: AudioFactory,
    private readonly gapMs: number = PLAYBACK_GAP_MS,
    private readonly delay: (ms: number) => Promise<void> = sleep,
  ) {}

  /** Returns true when the whole A-then-B sequence completed uninterrupted. */
  async playPair(clips: Blob[], listener: PlaybackListener): Promise<boolean> {
    this.stop();
    this.cancelled = false;
    for (let index = 0; index < clips.length; index++) {
      const clip = clips[index];
      if (clip === undefined) continue;
      if (index > 0) {
        await this.delay(this.gapMs);
        if (this.cancelled) return false;
      }
      listener(index, "playing");
      const finished = await this.playOne(clip, index);
      listener(index, "played");
      if (!finished) return false;
    }
    return !this.cancelled;
  }

  private playOne(clip: Blob, index: number): Promise<boolean> {
    return new Promise<boolean>((resolve) => {
      const handle = this.factory(clip, index);
      this.current = handle;
      this.waker = () => resolve(false);
      handle.onEnded(() => {
        if (this.current === handle) {
          this.current = null;
          this.waker = null;
        }
        resolve(true);
      });
      handle.play();
    });
  }

  stop(): void {
    this.cancelled = true;
    if (this.current) {
      this.current.stop();
      this.current = null;
    }
    if (this.waker) {
      const wake = this.waker;
      this.waker = null;
      wake();
    }
  }
}
