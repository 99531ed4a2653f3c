/**
 * Browser entry point: socket wiring and rerender-on-change.
 *
 * Everything interesting lives in session/render/cues; this file only glues
 * them to a WebSocket and a mount node.
 */

import { SYNC_CADENCE_MS } from "./clock.js";
import { defaultDeps, executeCue } from "./cues.js";
import { renderDisconnectModal, renderInterface } from "./render.js";
import { ClientSession } from "./session.js";

export interface ConnectOptions {
  wsUrl: string;
  performance: string;
  nickname: string;
  role: string;
  mount: HTMLElement;
}

export function connect(opts: ConnectOptions): ClientSession {
  const doc = opts.mount.ownerDocument;
  const ws = new WebSocket(opts.wsUrl);
  const deps = defaultDeps({
    showImage: (part) => {
      const region = opts.mount.querySelector(".image-display");
      if (region && typeof part.url === "string") {
        region.innerHTML = "";
        const img = doc.createElement("img");
        img.src = part.url;
        img.alt = part.name;
        region.appendChild(img);
      }
    },
    playAudio: (part) => {
      const sink = opts.mount.querySelector("audio");
      if (sink && typeof part.url === "string") {
        sink.src = part.url;
        void sink.play();
      }
    },
    showText: (part) => {
      const region = opts.mount.querySelector(".text-display");
      if (region) {
        region.textContent = typeof part.text === "string" ? part.text : part.name;
      }
    },
  });

  const session: ClientSession = new ClientSession(
    { send: (data) => ws.send(data) },
    {
      onCue: (cue) => {
        void executeCue(session, cue, deps).then(rerender);
      },
      onRosterUpdate: rerender,
      onActivity: rerender,
      onError: rerender,
      playTelebrain: () => {
        const sink = opts.mount.querySelector("audio");
        if (sink) {
          sink.src = "/blob/telebrain";
          void sink.play();
        }
      },
    },
  );

  function rerender(): void {
    opts.mount.innerHTML = "";
    opts.mount.appendChild(renderInterface(session, doc));
  }

  let pinger: ReturnType<typeof setInterval> | undefined;
  ws.addEventListener("open", () => {
    session.join(opts.performance, opts.nickname, opts.role);
    session.sendClockPing();
    pinger = setInterval(() => session.sendClockPing(), SYNC_CADENCE_MS);
  });
  ws.addEventListener("message", (event) => {
    session.handleFrame(String(event.data));
    rerender();
  });
  ws.addEventListener("close", () => {
    if (pinger !== undefined) {
      clearInterval(pinger);
    }
    session.markDisconnected();
    opts.mount.appendChild(
      renderDisconnectModal(doc, () => {
        opts.mount.innerHTML = "";
        connect(opts);
      }),
    );
  });

  rerender();
  return session;
}
