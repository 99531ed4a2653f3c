/**
 * Wire protocol: frame types, canonical serialization, sequence tracking.
 *
 * Frames are JSON objects with `type`, `seq`, `payload`. Serialization is
 * canonical (sorted keys, no whitespace) so any frame can be compared or
 * stored byte-for-byte. Unknown top-level fields survive a round trip.
 */

export const MESSAGE_TYPES = [
  "join",
  "join_ack",
  "leave",
  "roster_update",
  "cue",
  "cue_ack",
  "clock_ping",
  "clock_pong",
  "activity_update",
  "send_request",
  "error",
  "functionality_change",
  "test_toggle",
] as const;

export type MessageType = (typeof MESSAGE_TYPES)[number];

/** Every capability flag, in the server's declaration order. */
export const CAPABILITIES = [
  "send-text",
  "send-tts-live",
  "send-image",
  "send-audio",
  "send-association",
  "send-fraction",
  "send-osc",
  "send-algorithm",
  "receive-text",
  "receive-tts-live",
  "receive-image",
  "receive-audio",
  "receive-interface",
  "receive-osc",
  "show-menu",
  "show-title",
  "role-list",
  "performer-list",
  "performer-activity-log",
  "global-activity-log",
  "change-role",
  "change-interface",
  "change-functionality",
  "test-functionality",
] as const;

export type Capability = (typeof CAPABILITIES)[number];
export type CapabilityMap = Record<Capability, boolean>;

export interface WireMessage {
  type: MessageType;
  seq: number;
  payload: Record<string, unknown>;
  /** Unknown top-level fields, preserved for round trips. */
  extra?: Record<string, unknown>;
}

export interface RosterEntry {
  nickname: string;
  role: string;
  capabilities: string[];
  "test-mode": boolean;
}

export interface CuePart {
  content: string | null;
  kind: string;
  name: string;
  verb: string;
  url?: string;
  duration?: number;
  text?: string;
  [key: string]: unknown;
}

export interface CueFrame {
  "cue-id": string;
  sender: string;
  "execute-at": number;
  "delay-budget": number;
  parts: CuePart[];
}

export class ProtocolError extends Error {
  constructor(
    message: string,
    readonly code: string = "protocol",
  ) {
    super(message);
    this.name = "ProtocolError";
  }
}

/** JSON with lexicographically sorted keys and no whitespace. */
export function canonicalJson(value: unknown): string {
  if (value === null || typeof value !== "object") {
    return JSON.stringify(value);
  }
  if (Array.isArray(value)) {
    return "[" + value.map(canonicalJson).join(",") + "]";
  }
  const obj = value as Record<string, unknown>;
  const keys = Object.keys(obj).sort();
  const body = keys.map((k) => JSON.stringify(k) + ":" + canonicalJson(obj[k]));
  return "{" + body.join(",") + "}";
}

export function serialize(msg: WireMessage): string {
  const doc: Record<string, unknown> = {
    type: msg.type,
    seq: msg.seq,
    payload: msg.payload,
    ...(msg.extra ?? {}),
  };
  return canonicalJson(doc);
}

export function deserialize(data: string): WireMessage {
  let doc: unknown;
  try {
    doc = JSON.parse(data);
  } catch (e) {
    throw new ProtocolError(`malformed frame: ${(e as Error).message}`, "malformed");
  }
  if (doc === null || typeof doc !== "object" || Array.isArray(doc)) {
    throw new ProtocolError("frame must be a JSON object", "malformed");
  }
  const rec = doc as Record<string, unknown>;
  const { type, seq, payload, ...extra } = rec;
  if (typeof type !== "string" || typeof seq !== "number" || payload === undefined) {
    throw new ProtocolError("frame missing type/seq/payload", "malformed");
  }
  if (!(MESSAGE_TYPES as readonly string[]).includes(type)) {
    throw new ProtocolError(`unknown message type '${type}'`, "unknown-type");
  }
  if (!Number.isInteger(seq) || seq < 1) {
    throw new ProtocolError("seq must be a positive integer");
  }
  if (payload === null || typeof payload !== "object" || Array.isArray(payload)) {
    throw new ProtocolError("payload must be a JSON object", "malformed");
  }
  const msg: WireMessage = {
    type: type as MessageType,
    seq,
    payload: payload as Record<string, unknown>,
  };
  if (Object.keys(extra).length > 0) {
    msg.extra = extra;
  }
  return msg;
}

export interface SeqGap {
  expected: number;
  got: number;
}

/** Inbound sequence check: gaps tolerated and listed, regressions fatal. */
export class SeqTracker {
  last: number | null = null;
  gaps: SeqGap[] = [];

  observe(seq: number): SeqGap | null {
    if (this.last !== null && seq <= this.last) {
      throw new ProtocolError(`seq regression: ${seq} after ${this.last}`, "seq-regression");
    }
    const expected = this.last === null ? 1 : this.last + 1;
    this.last = seq;
    if (seq !== expected) {
      const gap = { expected, got: seq };
      this.gaps.push(gap);
      return gap;
    }
    return null;
  }
}

export class SeqSource {
  private n = 0;

  next(): number {
    this.n += 1;
    return this.n;
  }
}

/** Total flag map from a capability name list; unknown names are ignored. */
export function capabilityMap(names: Iterable<string>): CapabilityMap {
  const have = new Set(names);
  const map = {} as CapabilityMap;
  for (const cap of CAPABILITIES) {
    map[cap] = have.has(cap);
  }
  return map;
}
