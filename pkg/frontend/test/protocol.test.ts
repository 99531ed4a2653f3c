import { readFileSync, readdirSync } from "node:fs";
import { join } from "node:path";
import { describe, expect, it } from "vitest";
import {
  CAPABILITIES,
  MESSAGE_TYPES,
  ProtocolError,
  SeqSource,
  SeqTracker,
  capabilityMap,
  deserialize,
  serialize,
} from "../src/protocol.js";

// vitest runs from frontend/, so the corpus lives one level up
const GOLDEN_DIR = join(process.cwd(), "..", "docs", "golden");

function goldenBytes(name: string): string {
  return readFileSync(join(GOLDEN_DIR, name), "utf8");
}

describe("golden corpus", () => {
  const files = readdirSync(GOLDEN_DIR).filter((f) => f.endsWith(".json"));

  it("covers every message type exactly once", () => {
    expect(files.length).toBe(MESSAGE_TYPES.length);
    const types = files.map((f) => deserialize(goldenBytes(f)).type).sort();
    expect(types).toEqual([...MESSAGE_TYPES].sort());
  });

  it.each(files)("%s round-trips byte-identically", (file) => {
    const raw = goldenBytes(file);
    const msg = deserialize(raw);
    expect(serialize(msg)).toBe(raw);
  });

  it("join_ack capability map keys equal the client capability list", () => {
    const ack = deserialize(goldenBytes("join_ack.json"));
    const caps = ack.payload.capabilities as Record<string, boolean>;
    expect(Object.keys(caps).sort()).toEqual([...CAPABILITIES].sort());
  });

  it("preserves unknown top-level fields through a round trip", () => {
    const raw = '{"payload":{},"seq":3,"trace":"xyz","type":"leave"}';
    expect(serialize(deserialize(raw))).toBe(raw);
  });
});

describe("deserialize validation", () => {
  it("rejects non-JSON with code malformed", () => {
    expect(() => deserialize("{nope")).toThrowError(ProtocolError);
    try {
      deserialize("{nope");
    } catch (e) {
      expect((e as ProtocolError).code).toBe("malformed");
    }
  });

  it("rejects unknown types with code unknown-type", () => {
    try {
      deserialize('{"payload":{},"seq":1,"type":"dance"}');
      expect.unreachable();
    } catch (e) {
      expect((e as ProtocolError).code).toBe("unknown-type");
    }
  });

  it("rejects missing payload and non-object payloads", () => {
    expect(() => deserialize('{"seq":1,"type":"leave"}')).toThrowError(ProtocolError);
    expect(() => deserialize('{"payload":[1],"seq":1,"type":"leave"}')).toThrowError(
      ProtocolError,
    );
  });

  it("rejects zero, negative, and fractional seq", () => {
    for (const bad of [0, -1, 1.5]) {
      expect(() =>
        deserialize(`{"payload":{},"seq":${bad},"type":"leave"}`),
      ).toThrowError(ProtocolError);
    }
  });
});

describe("sequence tracking", () => {
  it("expects 1 first and accepts a contiguous run", () => {
    const t = new SeqTracker();
    expect(t.observe(1)).toBeNull();
    expect(t.observe(2)).toBeNull();
    expect(t.observe(3)).toBeNull();
    expect(t.gaps).toEqual([]);
  });

  it("records gaps and keeps going", () => {
    const t = new SeqTracker();
    t.observe(1);
    const gap = t.observe(5);
    expect(gap).toEqual({ expected: 2, got: 5 });
    expect(t.observe(6)).toBeNull();
    expect(t.gaps).toEqual([{ expected: 2, got: 5 }]);
  });

  it("treats a regression as fatal", () => {
    const t = new SeqTracker();
    t.observe(1);
    t.observe(2);
    try {
      t.observe(2);
      expect.unreachable();
    } catch (e) {
      expect((e as ProtocolError).code).toBe("seq-regression");
    }
  });

  it("SeqSource counts from 1", () => {
    const s = new SeqSource();
    expect([s.next(), s.next(), s.next()]).toEqual([1, 2, 3]);
  });
});

describe("capabilityMap", () => {
  it("is total over the flag list", () => {
    const map = capabilityMap(["receive-audio", "bogus-flag"]);
    expect(Object.keys(map).length).toBe(CAPABILITIES.length);
    expect(map["receive-audio"]).toBe(true);
    expect(map["send-text"]).toBe(false);
  });
});
