import type { FlowController } from "./controller.js";
import type { Store } from "./state.js";
import { bothClipsReady, VOICE_LABELS, type AppState } from "./types.js";

/**
 * Renders the app into `root` and re-renders on every store update.
 * Static skeleton built once; dynamic bits are patched in place so button
 * focus survives updates. Both choice buttons are native <button>s (keyboard
 * operable by default) and the playing indicator is mirrored into an
 * aria-live region.
 */
export function mountView(root: HTMLElement, store: Store, controller: FlowController): void {
  root.innerHTML = `
    <main class="app">
      <h1>Voice designer</h1>
      <p class="hint">Listen to both voices, pick the one you prefer, repeat until happy.</p>
      <p class="announce" aria-live="polite" data-testid="announce"></p>
      <p class="generation">Generation <span data-testid="generation">0</span></p>
      <section class="voices">
        ${[0, 1]
          .map(
            (i) => `
        <article class="voice-card" data-voice="${i}">
          <h2>${VOICE_LABELS[i]}</h2>
          <p class="voice-state" data-testid="voice-state-${i}">idle</p>
          <button type="button" data-testid="choose-${i}" disabled>
            Choose ${VOICE_LABELS[i]}
          </button>
        </article>`,
          )
          .join("")}
      </section>
      <div class="controls">
        <button type="button" data-testid="start">Start</button>
        <button type="button" data-testid="replay" hidden>Replay</button>
        <button type="button" data-testid="finish" hidden>Finish &amp; download</button>
      </div>
      <p class="error" role="alert" data-testid="error" hidden></p>
    </main>`;

  const query = <T extends HTMLElement>(selector: string): T => {
    const element = root.querySelector<T>(selector);
    if (!element) throw new Error(`missing element ${selector}`);
    return element;
  };

  const announce = query<HTMLElement>('[data-testid="announce"]');
  const generation = query<HTMLElement>('[data-testid="generation"]');
  const startButton = query<HTMLButtonElement>('[data-testid="start"]');
  const replayButton = query<HTMLButtonElement>('[data-testid="replay"]');
  const finishButton = query<HTMLButtonElement>('[data-testid="finish"]');
  const errorLine = query<HTMLElement>('[data-testid="error"]');
  const chooseButtons = [0, 1].map((i) =>
    query<HTMLButtonElement>(`[data-testid="choose-${i}"]`),
  );
  const voiceStates = [0, 1].map((i) =>
    query<HTMLElement>(`[data-testid="voice-state-${i}"]`),
  );

  startButton.addEventListener("click", () => void controller.start());
  replayButton.addEventListener("click", () => void controller.playCurrentPair());
  finishButton.addEventListener("click", () => void controller.finishAndDownload());
  chooseButtons.forEach((button, index) =>
    button.addEventListener("click", () => void controller.choose(index as 0 | 1)),
  );

  const render = (state: AppState) => {
    announce.textContent = state.announcement;
    generation.textContent = String(state.generation);

    const active =
      state.phase === "ready" || state.phase === "loading" || state.phase === "posting";
    const choosable = state.phase === "ready" && bothClipsReady(state.voices);
    chooseButtons.forEach((button, i) => {
      button.disabled = !choosable;
      const voice = state.voices[i];
      const card = button.closest(".voice-card");
      voiceStates[i]!.textContent = voice ? voice.playback_state : "idle";
      card?.classList.toggle("playing", voice?.playback_state === "playing");
    });

    startButton.hidden = state.phase !== "idle" && state.phase !== "error";
    replayButton.hidden = !choosable;
    finishButton.hidden = !active;
    finishButton.disabled = state.phase === "posting";

    errorLine.hidden = state.error === null;
    errorLine.textContent = state.error ?? "";
    root.dataset["phase"] = state.phase;
  };

  store.subscribe(render);
}
