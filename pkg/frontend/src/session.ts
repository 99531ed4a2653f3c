/**
 * Live client session: one socket's worth of performance state.
 *
 * The session owns the wire bookkeeping (outgoing seq, inbound gap tracking),
 * the clock agreement, and the fields the interface renders from. It is
 * transport-agnostic: outgoing frames go to an injected sink so tests can
 * capture them and a browser build can hand them to a WebSocket.
 */

import {
  CapabilityMap,
  CueFrame,
  ProtocolError,
  RosterEntry,
  SeqSource,
  SeqTracker,
  WireMessage,
  capabilityMap,
  deserialize,
  serialize,
} from "./protocol.js";
import { ClockSync } from "./clock.js";

/** Receives serialized outgoing frames (a WebSocket's send, in production). */
export interface FrameSink {
  send(data: string): void;
}

export interface SessionError {
  code: string;
  message: string;
}

export interface SessionHooks {
  /** Called for each cue frame after seq accounting. */
  onCue?: (cue: CueFrame) => void;
  /** Called when the server reports an error frame. */
  onError?: (err: SessionError) => void;
  /** Called after roster or capability state changes. */
  onRosterUpdate?: (roster: RosterEntry[]) => void;
  /** Called with the server-formatted activity line, verbatim. */
  onActivity?: (line: string) => void;
  /** Enabling audio plays the named theme clip once. */
  playTelebrain?: () => void;
  /** Local clock in ms; injectable for tests. */
  now?: () => number;
}

export const TELEBRAIN_THEME = "telebrain";

export class ClientSession {
  performance: string | null = null;
  nickname: string | null = null;
  role: string | null = null;
  capabilities: CapabilityMap = capabilityMap([]);
  roster: RosterEntry[] = [];
  delayBudgetMs = 0;
  audioEnabled = false;
  testMode = false;
  joined = false;
  connected = true;
  lastError: SessionError | null = null;
  activityLines: string[] = [];

  readonly clock = new ClockSync();
  private readonly outSeq = new SeqSource();
  private readonly inSeq = new SeqTracker();
  private readonly ackedCues = new Set<string>();
  private readonly hooks: SessionHooks;
  private readonly sink: FrameSink;

  constructor(sink: FrameSink, hooks: SessionHooks = {}) {
    this.sink = sink;
    this.hooks = hooks;
  }

  /** Client-frame clock offset in ms: what to add to server times locally. */
  get clockOffsetMs(): number {
    return this.clock.synced ? -this.clock.offsetMs() : 0;
  }

  now(): number {
    return this.hooks.now ? this.hooks.now() : Date.now();
  }

  // ---- outgoing ---------------------------------------------------------

  private emit(type: WireMessage["type"], payload: Record<string, unknown>): void {
    this.sink.send(serialize({ type, seq: this.outSeq.next(), payload }));
  }

  join(performance: string, nickname: string, role: string, localIp = "0.0.0.0"): void {
    // t0 rides along so the bootstrap clock_pong is a usable sync sample
    this.emit("join", {
      performance,
      nickname,
      role,
      "local-ip": localIp,
      t0: this.now(),
    });
  }

  sendClockPing(): void {
    this.emit("clock_ping", { t0: this.now() });
  }

  sendContent(contentId: string, designation: Record<string, unknown>): void {
    this.emit("send_request", { content: contentId, designation });
  }

  sendText(text: string, designation: Record<string, unknown>): void {
    this.emit("send_request", { text, designation });
  }

  sendTtsText(text: string, designation: Record<string, unknown>): void {
    this.emit("send_request", { "tts-text": text, designation });
  }

  /** Ack a cue exactly once; repeats for the same cue id are dropped. */
  cueAck(cueId: string, late: boolean, error?: string): boolean {
    if (this.ackedCues.has(cueId)) {
      return false;
    }
    this.ackedCues.add(cueId);
    const payload: Record<string, unknown> = { "cue-id": cueId, late };
    if (error !== undefined) {
      payload.error = error;
    }
    this.emit("cue_ack", payload);
    return true;
  }

  functionalityChange(flags: string[]): void {
    this.emit("functionality_change", { flags });
  }

  testToggle(on: boolean): void {
    this.testMode = on;
    this.emit("test_toggle", { on });
  }

  leave(): void {
    this.emit("leave", {});
    this.joined = false;
  }

  setAudioEnabled(on: boolean): void {
    const wasOff = !this.audioEnabled;
    this.audioEnabled = on;
    if (on && wasOff) {
      this.hooks.playTelebrain?.();
    }
  }

  // ---- incoming ---------------------------------------------------------

  /**
   * Absorb one raw frame from the socket.
   *
   * Seq gaps are recorded and tolerated (a dropped cue cannot be replayed);
   * regressions poison the session because ordering is no longer trustworthy.
   */
  handleFrame(data: string): void {
    let msg: WireMessage;
    try {
      msg = deserialize(data);
      this.inSeq.observe(msg.seq);
    } catch (e) {
      if (e instanceof ProtocolError) {
        this.fail({ code: e.code, message: e.message });
        return;
      }
      throw e;
    }
    this.dispatch(msg);
  }

  private fail(err: SessionError): void {
    this.lastError = err;
    this.hooks.onError?.(err);
  }

  private dispatch(msg: WireMessage): void {
    const p = msg.payload;
    switch (msg.type) {
      case "join_ack": {
        this.performance = p.performance as string;
        this.nickname = p.nickname as string;
        this.role = p.role as string;
        this.capabilities = { ...(p.capabilities as CapabilityMap) };
        this.roster = (p.roster as RosterEntry[]) ?? [];
        this.delayBudgetMs = (p["delay-budget"] as number) ?? 0;
        this.joined = true;
        this.hooks.onRosterUpdate?.(this.roster);
        break;
      }
      case "clock_pong": {
        this.clock.addPong(p as { t0: number; t1: number; t2: number }, this.now());
        break;
      }
      case "roster_update": {
        this.roster = (p.roster as RosterEntry[]) ?? [];
        const mine = this.roster.find((r) => r.nickname === this.nickname);
        if (mine) {
          // functionality changes come back through the roster
          this.capabilities = capabilityMap(mine.capabilities);
          this.testMode = mine["test-mode"];
        }
        this.hooks.onRosterUpdate?.(this.roster);
        break;
      }
      case "activity_update": {
        const line = p.display as string;
        this.activityLines.push(line);
        this.hooks.onActivity?.(line);
        break;
      }
      case "cue": {
        this.hooks.onCue?.(p as unknown as CueFrame);
        break;
      }
      case "error": {
        this.fail({ code: p.code as string, message: p.message as string });
        break;
      }
      default:
        // client-bound traffic only; anything else is a server bug we log
        this.fail({
          code: "unexpected-type",
          message: `unexpected frame type '${msg.type}'`,
        });
    }
  }

  /** Socket closed underneath us: the interface shows the rejoin modal. */
  markDisconnected(): void {
    this.connected = false;
  }
}
