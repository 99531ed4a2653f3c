/**
 * Client-side clock agreement.
 *
 * Each clock_pong closes one four-timestamp exchange; the offset estimate is
 * ((t1-t0)+(t2-t3))/2 and the smoothed value is taken from the lowest-rtt
 * sample in a sliding window, because the least-delayed exchange carries the
 * least asymmetry error.
 */

export const SYNC_WINDOW = 8;
export const SYNC_CADENCE_MS = 5000;

export interface ClockSample {
  t0: number;
  t1: number;
  t2: number;
  t3: number;
}

export function estimateOffset(s: ClockSample): { offset: number; rtt: number } {
  if (s.t2 < s.t1) {
    throw new Error("server ordering: t2 < t1");
  }
  if (s.t3 < s.t0) {
    throw new Error("client ordering: t3 < t0");
  }
  const offset = ((s.t1 - s.t0) + (s.t2 - s.t3)) / 2;
  const rtt = (s.t3 - s.t0) - (s.t2 - s.t1);
  return { offset, rtt };
}

export class ClockSync {
  private samples: ClockSample[] = [];

  constructor(private window: number = SYNC_WINDOW) {}

  addSample(sample: ClockSample): void {
    this.samples.push(sample);
  }

  /** Absorb a clock_pong payload; t3 is the local receive time. */
  addPong(payload: { t0: number; t1: number; t2: number }, t3: number): void {
    this.addSample({ t0: payload.t0, t1: payload.t1, t2: payload.t2, t3 });
  }

  get synced(): boolean {
    return this.samples.length > 0;
  }

  /** Offset of the lowest-rtt sample among the most recent window. */
  offsetMs(): number {
    if (this.samples.length === 0) {
      throw new Error("no clock samples yet");
    }
    const recent = this.samples.slice(-this.window);
    let best = estimateOffset(recent[0]!);
    for (const sample of recent.slice(1)) {
      const est = estimateOffset(sample);
      if (est.rtt < best.rtt) {
        best = est; // strict: earliest wins on rtt ties
      }
    }
    return best.offset;
  }

  /**
   * Translate a server-time instant into this client's clock.
   *
   * offsetMs() is how far the server runs ahead, so the local alarm is
   * execute-at plus the client-frame correction (its negation).
   */
  localFireMs(executeAtMs: number): number {
    return Math.round(executeAtMs - this.offsetMs());
  }
}
