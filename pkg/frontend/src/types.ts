export type PlaybackState = "idle" | "playing" | "played";

export interface PairEntry {
  individual_id: string;
  audio_url: string;
}

export interface SessionPayload {
  session_id: string;
  generation: number;
  status: string;
  pair: PairEntry[];
}

export interface VoiceView {
  individual_id: string;
  audio_url: string;
  playback_state: PlaybackState;
  clip: Blob | null;
}

export interface PairView {
  session_id: string;
  generation: number;
  voices: VoiceView[];
}

export type Phase =
  | "idle"
  | "creating"
  | "loading"
  | "ready"
  | "posting"
  | "finishing"
  | "finished"
  | "error";

export interface AppState {
  phase: Phase;
  sessionId: string | null;
  generation: number;
  voices: VoiceView[];
  error: string | null;
  /** text for the ARIA live region (playing indicator, errors) */
  announcement: string;
}

export interface ConflictDetail {
  generation: number;
  candidates: string[];
}

export const VOICE_LABELS = ["Voice A", "Voice B"] as const;

export function bothClipsReady(voices: VoiceView[]): boolean {
  return voices.length === 2 && voices.every((v) => v.clip !== null);
}
