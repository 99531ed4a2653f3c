"""Server clock, client offset estimation, and simultaneous execution.

Delivery time to wireless clients cannot be predicted, so every cue gets a
delay budget: content is shipped immediately, stamped with a server-time
execute-at instant, and held by each client until its synchronized clock
reaches that instant. Clients estimate their offset to the server clock by
two-way time transfer and keep the estimate fresh with a min-round-trip
filter over a sliding window.

All times are integer server milliseconds except offset estimates, which
keep their half-millisecond of precision.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Protocol, Sequence

from .errors import RejectedError

DEFAULT_DELAY_BUDGET_MS = 200
SYNC_WINDOW = 8
SYNC_CADENCE_MS = 5000


class Clock(Protocol):
    def now_ms(self) -> int: ...


class SystemClock:
    def now_ms(self) -> int:
        return int(time.time() * 1000)


class VirtualClock:
    """Manually advanced clock for tests and simulation harnesses."""

    def __init__(self, start_ms: int = 0):
        self._now = start_ms

    def now_ms(self) -> int:
        return self._now

    def advance(self, ms: int) -> int:
        self._now += ms
        return self._now

    def set(self, ms: int) -> None:
        self._now = ms


@dataclass(frozen=True)
class ClockSample:
    """One two-way exchange: client send, server receive/send, client receive."""

    t0: int
    t1: int
    t2: int
    t3: int

    def __post_init__(self):
        if self.t2 < self.t1:
            raise RejectedError("server ordering: t1 <= t2")
        if self.t3 < self.t0:
            raise RejectedError("client ordering: t0 <= t3")


def estimate_offset(sample: ClockSample) -> tuple[float, int]:
    """Offset of the server clock relative to the client, plus round trip.

    offset = ((t1 - t0) + (t2 - t3)) / 2; exact whenever the two legs have
    equal latency, and off by at most half the asymmetry otherwise.
    """
    offset = ((sample.t1 - sample.t0) + (sample.t2 - sample.t3)) / 2
    rtt = (sample.t3 - sample.t0) - (sample.t2 - sample.t1)
    return offset, rtt


def smooth_offset(history: Sequence[tuple[float, int]], window: int = SYNC_WINDOW) -> float:
    """Pick the offset of the lowest-round-trip sample in the recent window.

    Low round trip means low asymmetry bound, so that sample's offset is the
    most trustworthy; earliest wins on ties.
    """
    if not history:
        raise RejectedError("no clock samples yet")
    recent = history[-window:]
    best = min(recent, key=lambda pair: pair[1])
    return best[0]


@dataclass(frozen=True)
class Schedule:
    """When a cue fires, in server time, plus the budget that produced it."""

    execute_at_ms: int
    delay_budget_ms: int

    def local_fire_ms(self, client_offset_ms: float) -> int:
        return round(self.execute_at_ms + client_offset_ms)


def schedule_cue(issue_ms: int, delay_budget_ms: int = DEFAULT_DELAY_BUDGET_MS) -> Schedule:
    if delay_budget_ms <= 0:
        raise RejectedError("delay budget > 0")
    return Schedule(execute_at_ms=issue_ms + delay_budget_ms, delay_budget_ms=delay_budget_ms)


def resolve_execution(schedule: Schedule, arrival_server_ms: int) -> tuple[int, bool]:
    """Server-time execution instant for a delivery, and whether it was late.

    Late deliveries execute immediately and are flagged, never dropped: a
    beat arriving late is still worth more to the performance than silence.
    """
    if arrival_server_ms > schedule.execute_at_ms:
        return arrival_server_ms, True
    return schedule.execute_at_ms, False


def metronome_ticks(start_ms: int, interval_ms: int, n: int) -> list[int]:
    """First *n* tick timestamps, each computed from the anchor.

    tick k = start + k * interval. Never derived from the previous tick, so
    execution jitter on one tick cannot drift the ones after it. Synchronized
    metronomes anchor start to server time; unsynchronized ones to the local
    clock.
    """
    if interval_ms <= 0:
        raise RejectedError("metronome interval > 0")
    if n < 0:
        raise RejectedError("tick count >= 0")
    return [start_ms + k * interval_ms for k in range(n)]


def timer_fire(armed_at_ms: int, duration_ms: int) -> int:
    """Single-shot analogue of a metronome tick."""
    if duration_ms <= 0:
        raise RejectedError("timer duration > 0")
    return armed_at_ms + duration_ms
