import { describe, expect, it } from "vitest";
import { deserialize, serialize } from "../src/protocol.js";
import { ClientSession } from "../src/session.js";

function frame(type: string, seq: number, payload: Record<string, unknown>): string {
  return serialize({ type: type as never, seq, payload });
}

describe("ClientSession", () => {
  it("sends join then pings with its own seq run", () => {
    const frames: string[] = [];
    const session = new ClientSession({ send: (d) => frames.push(d) }, { now: () => 777 });
    session.join("Free-For-All", "Nick", "Receiver", "10.0.0.9");
    session.sendClockPing();
    const [join, ping] = frames.map((f) => deserialize(f));
    expect(join!.type).toBe("join");
    expect(join!.seq).toBe(1);
    expect(join!.payload).toEqual({
      performance: "Free-For-All",
      nickname: "Nick",
      role: "Receiver",
      "local-ip": "10.0.0.9",
      t0: 777,
    });
    expect(ping!.type).toBe("clock_ping");
    expect(ping!.seq).toBe(2);
    expect(ping!.payload).toEqual({ t0: 777 });
  });

  it("feeds clock_pong into the sync with the local receive time", () => {
    let t = 1021;
    const session = new ClientSession({ send: () => {} }, { now: () => t });
    session.handleFrame(
      frame("clock_pong", 1, { t0: 1000, t1: 1050, t2: 1051 }),
    );
    expect(session.clock.synced).toBe(true);
    expect(session.clock.offsetMs()).toBe(40);
    expect(session.clockOffsetMs).toBe(-40);
    t = 2001; // later pongs use the later receive time
    session.handleFrame(frame("clock_pong", 2, { t0: 1980, t1: 2030, t2: 2031 }));
    expect(session.clock.offsetMs()).toBe(40);
  });

  it("tolerates seq gaps but reports regressions", () => {
    const errors: string[] = [];
    const session = new ClientSession(
      { send: () => {} },
      { onError: (e) => errors.push(e.code) },
    );
    session.handleFrame(frame("clock_pong", 1, { t0: 1, t1: 2, t2: 3 }));
    session.handleFrame(frame("clock_pong", 5, { t0: 4, t1: 5, t2: 6 }));
    expect(errors).toEqual([]);
    session.handleFrame(frame("clock_pong", 2, { t0: 7, t1: 8, t2: 9 }));
    expect(errors).toEqual(["seq-regression"]);
    expect(session.lastError?.code).toBe("seq-regression");
  });

  it("records server error frames", () => {
    const session = new ClientSession({ send: () => {} });
    session.handleFrame(
      frame("error", 1, { code: "capacity", message: "role 'Receiver' is full (3)" }),
    );
    expect(session.lastError).toEqual({
      code: "capacity",
      message: "role 'Receiver' is full (3)",
    });
  });

  it("flags client-bound-only violations as unexpected-type", () => {
    const session = new ClientSession({ send: () => {} });
    session.handleFrame(frame("send_request", 1, { content: "x", designation: {} }));
    expect(session.lastError?.code).toBe("unexpected-type");
  });

  it("appends activity lines verbatim in arrival order", () => {
    const session = new ClientSession({ send: () => {} });
    session.handleFrame(
      frame("activity_update", 1, { display: "Ana: play audio: Drone  17:40", entry: {} }),
    );
    session.handleFrame(
      frame("activity_update", 2, { display: "Nick: show image: Fsharp4  17:46", entry: {} }),
    );
    expect(session.activityLines).toEqual([
      "Ana: play audio: Drone  17:40",
      "Nick: show image: Fsharp4  17:46",
    ]);
  });

  it("marks disconnects for the rejoin modal", () => {
    const session = new ClientSession({ send: () => {} });
    expect(session.connected).toBe(true);
    session.markDisconnected();
    expect(session.connected).toBe(false);
  });
});
