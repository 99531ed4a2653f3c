import { readFileSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import { CueDeps, executeCue } from "../src/cues.js";
import { CueFrame, deserialize, serialize } from "../src/protocol.js";
import { ClientSession } from "../src/session.js";

// vitest runs from frontend/, so the corpus lives one level up
const GOLDEN_DIR = join(process.cwd(), "..", "docs", "golden");

function goldenCue(): CueFrame {
  const raw = readFileSync(join(GOLDEN_DIR, "cue.json"), "utf8");
  return deserialize(raw).payload as unknown as CueFrame;
}

/** Session joined via the golden ack, clock synced 40 ms behind the server. */
function makeSession(): { session: ClientSession; frames: string[] } {
  const frames: string[] = [];
  const session = new ClientSession({ send: (d) => frames.push(d) });
  const ack = deserialize(readFileSync(join(GOLDEN_DIR, "join_ack.json"), "utf8"));
  session.handleFrame(serialize({ type: "join_ack", seq: 1, payload: ack.payload }));
  // one exchange with symmetric 10 ms latency, server 40 ahead
  session.clock.addSample({ t0: 1000, t1: 1050, t2: 1051, t3: 1021 });
  return { session, frames };
}

function makeDeps(clock: { t: number }): { deps: CueDeps; events: string[] } {
  const events: string[] = [];
  const deps: CueDeps = {
    now: () => clock.t,
    wait: async (ms) => {
      events.push(`wait:${ms}`);
      clock.t += ms;
    },
    fetchBlob: async (url) => {
      events.push(`fetch:${url}`);
      return new Uint8Array([1, 2, 3]);
    },
    showImage: (part, bytes) => events.push(`image:${part.name}:${bytes.length}`),
    playAudio: (part) => events.push(`audio:${part.name}`),
    showText: (part) => events.push(`text:${String(part.text ?? part.name)}`),
  };
  return { deps, events };
}

function sentAcks(frames: string[]): Record<string, unknown>[] {
  return frames
    .map((f) => deserialize(f))
    .filter((m) => m.type === "cue_ack")
    .map((m) => m.payload);
}

describe("executeCue", () => {
  it("holds until the translated server tick, then acks on time", async () => {
    const { session, frames } = makeSession();
    expect(session.clock.offsetMs()).toBe(40);
    const clock = { t: 1100 }; // server now = 1140, cue fires at 1200
    const { deps, events } = makeDeps(clock);

    const report = await executeCue(session, goldenCue(), deps);

    expect(report.late).toBe(false);
    expect(report.heldMs).toBe(60); // local alarm 1160 = 1200 - 40
    expect(report.performed).toEqual(["image"]);
    expect(events).toEqual(["fetch:/blob/0c8e9a7e", "wait:60", "image:Fsharp4:3"]);
    expect(sentAcks(frames)).toEqual([
      { "cue-id": goldenCue()["cue-id"], late: false },
    ]);
  });

  it("plays immediately and acks late when the tick has passed", async () => {
    const { session, frames } = makeSession();
    const clock = { t: 1250 }; // server now = 1290 > 1200
    const { deps, events } = makeDeps(clock);

    const report = await executeCue(session, goldenCue(), deps);

    expect(report.late).toBe(true);
    expect(report.heldMs).toBe(0);
    expect(events).toEqual(["fetch:/blob/0c8e9a7e", "image:Fsharp4:3"]);
    expect(sentAcks(frames)).toEqual([
      { "cue-id": goldenCue()["cue-id"], late: true },
    ]);
  });

  it("fires instantly when the tick is due at arrival", async () => {
    const { session } = makeSession();
    const clock = { t: 1160 }; // server now = exactly 1200: not late, no hold
    const { deps, events } = makeDeps(clock);

    const report = await executeCue(session, goldenCue(), deps);

    expect(report.late).toBe(false);
    expect(report.heldMs).toBe(0);
    expect(events).toEqual(["fetch:/blob/0c8e9a7e", "image:Fsharp4:3"]);
  });

  it("acks a duplicate delivery only once", async () => {
    const { session, frames } = makeSession();
    const clock = { t: 1100 };
    const { deps } = makeDeps(clock);

    await executeCue(session, goldenCue(), deps);
    await executeCue(session, goldenCue(), deps);

    expect(sentAcks(frames).length).toBe(1);
  });

  it("never plays audio while audio is off, but still acks", async () => {
    const cue: CueFrame = {
      "cue-id": "aa".repeat(16),
      sender: "Nick",
      "execute-at": 1200,
      "delay-budget": 200,
      parts: [
        {
          content: "snd-1",
          kind: "audio",
          name: "Drone",
          verb: "play audio",
          url: "/blob/feed",
          duration: 100,
        },
      ],
    };
    const { session, frames } = makeSession();
    const clock = { t: 1100 };
    const { deps, events } = makeDeps(clock);

    const muted = await executeCue(session, cue, deps);
    expect(muted.performed).toEqual([]);
    expect(events.filter((e) => e.startsWith("audio:"))).toEqual([]);
    expect(sentAcks(frames)).toEqual([{ "cue-id": cue["cue-id"], late: false }]);

    session.setAudioEnabled(true);
    const cue2 = { ...cue, "cue-id": "bb".repeat(16) };
    clock.t = 1100;
    const audible = await executeCue(session, cue2, deps);
    expect(audible.performed).toEqual(["audio"]);
    expect(events.filter((e) => e.startsWith("audio:"))).toEqual(["audio:Drone"]);
  });

  it("acks with an error when a blob fetch fails", async () => {
    const { session, frames } = makeSession();
    const clock = { t: 1100 };
    const { deps, events } = makeDeps(clock);
    deps.fetchBlob = async () => {
      throw new Error("blob fetch failed: 404");
    };

    const report = await executeCue(session, goldenCue(), deps);

    expect(report.error).toBe("blob fetch failed: 404");
    expect(report.performed).toEqual([]);
    expect(events).toEqual([]); // nothing shown or played
    expect(sentAcks(frames)).toEqual([
      {
        "cue-id": goldenCue()["cue-id"],
        late: false,
        error: "blob fetch failed: 404",
      },
    ]);
  });

  it("shows inline text parts without fetching", async () => {
    const cue: CueFrame = {
      "cue-id": "cc".repeat(16),
      sender: "Nick",
      "execute-at": 1200,
      "delay-budget": 200,
      parts: [
        { content: null, kind: "text", name: "bow now", verb: "show text", text: "bow now" },
      ],
    };
    const { session } = makeSession();
    const clock = { t: 1250 };
    const { deps, events } = makeDeps(clock);

    const report = await executeCue(session, cue, deps);
    expect(report.performed).toEqual(["text"]);
    expect(events).toEqual(["text:bow now"]);
  });

  it("prefetches every image of a phrase and shows the first", async () => {
    const cue: CueFrame = {
      "cue-id": "dd".repeat(16),
      sender: "Nick",
      "execute-at": 1200,
      "delay-budget": 200,
      parts: [
        {
          content: "phrase-1",
          kind: "image-phrase",
          name: "Ascent",
          verb: "show images",
          images: [
            { content: "img-a", name: "A", url: "/blob/a" },
            { content: "img-b", name: "B", url: "/blob/b" },
          ],
        },
      ],
    };
    const { session } = makeSession();
    const clock = { t: 1250 };
    const { deps, events } = makeDeps(clock);

    const report = await executeCue(session, cue, deps);
    expect(report.performed).toEqual(["image-phrase"]);
    expect(events).toEqual(["fetch:/blob/a", "fetch:/blob/b", "image:Ascent:3"]);
  });

  it("cue frames reach the session's onCue hook", () => {
    const seen: CueFrame[] = [];
    const session = new ClientSession({ send: () => {} }, { onCue: (c) => seen.push(c) });
    const ack = deserialize(readFileSync(join(GOLDEN_DIR, "join_ack.json"), "utf8"));
    session.handleFrame(serialize({ type: "join_ack", seq: 1, payload: ack.payload }));
    const cueRaw = deserialize(readFileSync(join(GOLDEN_DIR, "cue.json"), "utf8"));
    session.handleFrame(serialize({ type: "cue", seq: 2, payload: cueRaw.payload }));
    expect(seen.length).toBe(1);
    expect(seen[0]!["execute-at"]).toBe(1200);
  });
});
