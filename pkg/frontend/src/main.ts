import { ServiceClient } from "./api.js";
import { FlowController } from "./controller.js";
import { triggerDownload } from "./download.js";
import { AlternatingPlayback, htmlAudioFactory } from "./player.js";
import { Store } from "./state.js";
import { mountView } from "./view.js";

declare global {
  interface Window {
    __EVOFORGE_SERVICE__?: string;
  }
}

function serviceBaseUrl(): string {
  const fromQuery = new URLSearchParams(window.location.search).get("service");
  return fromQuery ?? window.__EVOFORGE_SERVICE__ ?? "http://127.0.0.1:8321";
}

const root = document.getElementById("app");
if (!root) throw new Error("missing #app mount point");

const store = new Store();
const controller = new FlowController(
  new ServiceClient(serviceBaseUrl()),
  new AlternatingPlayback(htmlAudioFactory),
  store,
  triggerDownload,
);
mountView(root, store, controller);
