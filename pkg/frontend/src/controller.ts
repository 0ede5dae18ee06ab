import { ServiceClient, ServiceError } from "./api.js";
import type { DownloadFn } from "./download.js";
import { AlternatingPlayback } from "./player.js";
import { Store } from "./state.js";
import {
  bothClipsReady,
  VOICE_LABELS,
  type ConflictDetail,
  type SessionPayload,
  type VoiceView,
} from "./types.js";

/**
 * Orchestrates one customization flow: create session, prefetch both clips,
 * alternate playback, post judgments, finish and download.
 *
 * Invariants enforced here:
 *  - choices are ignored until both clips are fetched (the view also keeps
 *    the buttons disabled);
 *  - at most one judgment request is in flight;
 *  - the generation shown always comes from a service response, never from
 *    local arithmetic;
 *  - a 409 refreshes the pair from the error detail without advancing.
 */
export class FlowController {
  private inFlight = false;

  constructor(
    private readonly api: ServiceClient,
    private readonly playback: AlternatingPlayback,
    readonly store: Store,
    private readonly download: DownloadFn,
  ) {}

  async start(): Promise<void> {
    if (this.store.get().phase !== "idle" && this.store.get().phase !== "error") return;
    this.store.update({ phase: "creating", error: null, announcement: "Creating session" });
    try {
      const payload = await this.api.createSession();
      await this.showPair(payload);
      void this.playCurrentPair();
    } catch (error) {
      this.fail(error);
    }
  }

  /** Replace the displayed pair and prefetch both clips concurrently. */
  private async showPair(payload: SessionPayload): Promise<void> {
    const voices: VoiceView[] = payload.pair.map((entry) => ({
      individual_id: entry.individual_id,
      audio_url: entry.audio_url,
      playback_state: "idle",
      clip: null,
    }));
    this.store.update({
      phase: "loading",
      sessionId: payload.session_id,
      generation: payload.generation,
      voices,
      announcement: "Fetching voices",
    });
    const clips = await Promise.all(
      payload.pair.map((entry) => this.api.fetchClip(entry.audio_url)),
    );
    const loaded = voices.map((voice, i) => ({ ...voice, clip: clips[i] ?? null }));
    this.store.update({ phase: "ready", voices: loaded, announcement: "Voices ready" });
  }

  async playCurrentPair(): Promise<void> {
    const state = this.store.get();
    if (state.phase !== "ready" || !bothClipsReady(state.voices)) return;
    const clips = state.voices.map((v) => v.clip as Blob);
    await this.playback.playPair(clips, (index, playbackState) => {
      const voices = this.store
        .get()
        .voices.map((voice, i) =>
          i === index ? { ...voice, playback_state: playbackState } : voice,
        );
      const announcement =
        playbackState === "playing"
          ? `${VOICE_LABELS[index as 0 | 1]} is playing`
          : this.store.get().announcement;
      this.store.update({ voices, announcement });
    });
  }

  canChoose(): boolean {
    const state = this.store.get();
    return state.phase === "ready" && bothClipsReady(state.voices) && !this.inFlight;
  }

  async choose(index: 0 | 1): Promise<void> {
    if (!this.canChoose()) return;
    const state = this.store.get();
    const voice = state.voices[index];
    if (!voice || state.sessionId === null) return;
    this.playback.stop();
    this.inFlight = true;
    this.store.update({ phase: "posting", announcement: "Submitting choice" });
    try {
      const payload = await this.api.submitJudgment(
        state.sessionId,
        voice.individual_id,
        state.generation,
      );
      if (payload.status !== "active") {
        this.store.update({
          phase: "finished",
          generation: payload.generation,
          voices: [],
          announcement: "Session finished",
        });
        return;
      }
      await this.showPair(payload);
      void this.playCurrentPair();
    } catch (error) {
      if (error instanceof ServiceError && error.status === 409) {
        await this.refreshFromConflict(error);
      } else {
        this.fail(error);
      }
    } finally {
      this.inFlight = false;
    }
  }

  /** Stale judgment: rebuild the current pair from the conflict detail. */
  private async refreshFromConflict(error: ServiceError): Promise<void> {
    const state = this.store.get();
    const detail = error.body.detail as ConflictDetail | undefined;
    if (!detail || state.sessionId === null) {
      this.fail(error);
      return;
    }
    const payload: SessionPayload = {
      session_id: state.sessionId,
      generation: detail.generation,
      status: "active",
      pair: detail.candidates.map((id) => ({
        individual_id: id,
        audio_url: this.api.audioUrlFor(state.sessionId as string, id),
      })),
    };
    await this.showPair(payload);
    void this.playCurrentPair();
  }

  async finishAndDownload(): Promise<void> {
    const state = this.store.get();
    if (state.sessionId === null || this.inFlight) return;
    if (state.phase !== "ready" && state.phase !== "loading") return;
    this.playback.stop();
    this.inFlight = true;
    this.store.update({ phase: "finishing", announcement: "Preparing voice file" });
    try {
      const { blob, filename } = await this.api.finish(state.sessionId);
      this.download(blob, filename);
      this.store.update({
        phase: "finished",
        voices: [],
        announcement: "Voice file downloaded",
      });
    } catch (error) {
      this.fail(error);
    } finally {
      this.inFlight = false;
    }
  }

  private fail(error: unknown): void {
    const message = error instanceof Error ? error.message : String(error);
    this.store.update({ phase: "error", error: message, announcement: `Error: ${message}` });
  }
}
