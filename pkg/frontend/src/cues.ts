/**
 * Scheduled cue execution.
 *
 * A cue names a server-time instant (`execute-at`). The client prefetches
 * any referenced blobs at receipt, translates the instant into its own clock
 * via the sync offset, holds until that tick, then performs each part. Cues
 * that arrive after their instant play immediately and are acked late.
 *
 * All timing and media effects go through an injected dependency bag so the
 * hold/late logic is testable against a mocked clock.
 */

import { CueFrame, CuePart } from "./protocol.js";
import { ClientSession } from "./session.js";

export interface CueDeps {
  /** Local clock, same frame the ClockSync samples used for t0/t3. */
  now(): number;
  /** Hold primitive; resolves after ms of local time. */
  wait(ms: number): Promise<void>;
  fetchBlob(url: string): Promise<Uint8Array>;
  showImage(part: CuePart, bytes: Uint8Array): void;
  playAudio(part: CuePart, bytes: Uint8Array): void;
  showText(part: CuePart): void;
  showImagePhrase?(part: CuePart, images: Uint8Array[]): void;
  applyInterface?(part: CuePart): void;
}

export interface CueReport {
  late: boolean;
  /** How long the executor held before performing, in local ms. */
  heldMs: number;
  /** Part kinds actually performed (audio is skipped while audio is off). */
  performed: string[];
  error?: string;
}

export function defaultDeps(overrides: Partial<CueDeps> = {}): CueDeps {
  return {
    now: () => Date.now(),
    wait: (ms) => new Promise((resolve) => setTimeout(resolve, ms)),
    fetchBlob: async (url) => {
      const res = await fetch(url);
      if (!res.ok) {
        throw new Error(`blob fetch failed: ${res.status}`);
      }
      return new Uint8Array(await res.arrayBuffer());
    },
    showImage: () => {},
    playAudio: () => {},
    showText: () => {},
    ...overrides,
  };
}

function blobUrls(part: CuePart): string[] {
  if (typeof part.url === "string") {
    return [part.url];
  }
  if (Array.isArray(part.images)) {
    return (part.images as { url: string }[]).map((img) => img.url);
  }
  return [];
}

/**
 * Run one cue to completion. Sends cue_ack exactly once per cue id, even if
 * the same cue is delivered twice or a blob fetch fails.
 */
export async function executeCue(
  session: ClientSession,
  cue: CueFrame,
  deps: CueDeps,
): Promise<CueReport> {
  const executeAt = cue["execute-at"];
  const offset = session.clock.synced ? session.clock.offsetMs() : 0;
  const arrivalServerMs = deps.now() + offset;
  const late = arrivalServerMs > executeAt;

  // prefetch at receipt, before the hold
  const fetched = new Map<string, Uint8Array>();
  for (const part of cue.parts) {
    for (const url of blobUrls(part)) {
      if (fetched.has(url)) {
        continue;
      }
      try {
        fetched.set(url, await deps.fetchBlob(url));
      } catch (e) {
        const error = (e as Error).message;
        session.cueAck(cue["cue-id"], late, error);
        return { late, heldMs: 0, performed: [], error };
      }
    }
  }

  let heldMs = 0;
  if (!late) {
    const target = session.clock.synced
      ? session.clock.localFireMs(executeAt)
      : executeAt;
    heldMs = Math.max(0, target - deps.now());
    if (heldMs > 0) {
      await deps.wait(heldMs);
    }
  }

  const performed: string[] = [];
  for (const part of cue.parts) {
    switch (part.kind) {
      case "image": {
        deps.showImage(part, fetched.get(part.url as string) ?? new Uint8Array());
        performed.push(part.kind);
        break;
      }
      case "audio": {
        if (!session.audioEnabled) {
          break; // never play audio while audio is off
        }
        deps.playAudio(part, fetched.get(part.url as string) ?? new Uint8Array());
        performed.push(part.kind);
        break;
      }
      case "text": {
        deps.showText(part);
        performed.push(part.kind);
        break;
      }
      case "image-phrase": {
        const images = (part.images as { url: string }[] | undefined) ?? [];
        const bytes = images.map((img) => fetched.get(img.url) ?? new Uint8Array());
        if (deps.showImagePhrase) {
          deps.showImagePhrase(part, bytes);
        } else if (bytes.length > 0) {
          // no phrase handler: show the first image, later ticks step onward
          deps.showImage(part, bytes[0]!);
        }
        performed.push(part.kind);
        break;
      }
      case "interface": {
        deps.applyInterface?.(part);
        performed.push(part.kind);
        break;
      }
      default:
        break; // unknown kinds are skipped, not fatal
    }
  }

  session.cueAck(cue["cue-id"], late);
  return { late, heldMs, performed };
}
