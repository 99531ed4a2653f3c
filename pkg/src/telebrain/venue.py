"""Live performances: roster lifecycle, routing, fractions, activity logs.

A venue is a stored template; instantiating one produces a Performance that
lives here until its last performer leaves. All routing decisions (precedence,
capability filtering, pair degradation, fraction partitioning) are resolved
server-side so every client sees the same outcome.
"""

from __future__ import annotations

import logging
import random
import threading
import uuid
from dataclasses import dataclass
from datetime import datetime, timezone
from typing import Callable, Optional
from zoneinfo import ZoneInfo

from . import timing
from .domain import (
    AlgorithmKind,
    AlgorithmObject,
    Capability,
    Collection,
    CollectionKind,
    ContentObject,
    DomainObject,
    FractionalAssignment,
    FractionMode,
    InterfaceObject,
    MultiRoleAssignment,
    Venue,
)
from .errors import (
    CapabilityError,
    CapacityError,
    JoinError,
    NotFoundError,
    PerformanceGoneError,
    RejectedError,
    RoutingError,
)
from .store import ContentStore

log = logging.getLogger(__name__)

Getter = Callable[[str], DomainObject]


@dataclass(frozen=True)
class CuePart:
    """One deliverable unit of a cue: what to fetch, gate, and log.

    ``kind`` is the wire tag; ``receive`` the capability a receiver needs.
    ``inline`` carries payloads with no stored object (live chat text).
    """

    content_id: Optional[str]
    kind: str
    receive: Capability
    verb: str
    name: str
    inline: Optional[dict] = None


def deliverable_parts(obj: DomainObject, get: Getter) -> list[CuePart]:
    """Flatten an object into its deliverable parts.

    Pairs split into an audio part and an image part so each receiver can
    keep the subset its role accepts. Folders have no deliverable form.
    Stored text-to-speech is audio like any other; the live-typed path is
    gated separately.
    """
    if isinstance(obj, ContentObject):
        if obj.is_audio():
            return [CuePart(obj.id, "audio", Capability.RECEIVE_AUDIO, "play audio", obj.name)]
        if obj.is_image():
            return [CuePart(obj.id, "image", Capability.RECEIVE_IMAGE, "show image", obj.name)]
        return [CuePart(obj.id, "text", Capability.RECEIVE_TEXT, "show text", obj.name)]
    if isinstance(obj, Collection):
        if obj.kind is CollectionKind.AUDIO_IMAGE_PAIR:
            parts: list[CuePart] = []
            for mid in obj.members:
                parts.extend(deliverable_parts(get(mid), get))
            return parts
        if obj.kind in (CollectionKind.AUDIO_SENTENCE, CollectionKind.AUDIO_LAYER):
            return [CuePart(obj.id, "audio", Capability.RECEIVE_AUDIO, "play audio", obj.name)]
        if obj.kind is CollectionKind.IMAGE_PHRASE:
            return [CuePart(obj.id, "image-phrase", Capability.RECEIVE_IMAGE, "show images", obj.name)]
        return []
    if isinstance(obj, InterfaceObject):
        return [CuePart(obj.id, "interface", Capability.RECEIVE_INTERFACE, "send interface", obj.name)]
    return []


def receivable_parts(caps: frozenset[Capability], obj: DomainObject, get: Getter) -> list[CuePart]:
    return [p for p in deliverable_parts(obj, get) if p.receive in caps]


def send_capability_for(obj: DomainObject) -> Capability:
    if isinstance(obj, ContentObject):
        if obj.is_audio():
            return Capability.SEND_AUDIO
        if obj.is_image():
            return Capability.SEND_IMAGE
        return Capability.SEND_TEXT
    if isinstance(obj, Collection):
        return Capability.SEND_ASSOCIATION
    if isinstance(obj, MultiRoleAssignment):
        return Capability.SEND_ASSOCIATION
    if isinstance(obj, FractionalAssignment):
        return Capability.SEND_FRACTION
    if isinstance(obj, AlgorithmObject):
        return Capability.SEND_ALGORITHM
    raise RejectedError(f"object of type {type(obj).__name__} cannot be sent")


@dataclass
class Performer:
    """Roster entry; mutable runtime state, not a stored document."""

    nickname: str
    role_name: str
    connection_id: str
    local_ip: Optional[str] = None
    clock_offset_ms: float = 0.0
    present: bool = True
    capability_overrides: Optional[frozenset[Capability]] = None
    test_mode: bool = False


@dataclass(frozen=True)
class ActivityEntry:
    """One log line; ``line()`` is the display form without the timestamp."""

    timestamp_ms: int
    sender: str
    verb: str
    content_name: str
    participants: frozenset[str]  # sender + receiver nicknames, for scoping
    test: bool = False

    def line(self) -> str:
        return f"{self.sender}: {self.verb}: {self.content_name}"

    def to_dict(self) -> dict:
        return {
            "timestamp": self.timestamp_ms,
            "sender": self.sender,
            "verb": self.verb,
            "content-name": self.content_name,
            "test": self.test,
        }


@dataclass(frozen=True)
class Delivery:
    connection_id: str
    nickname: str
    parts: tuple[CuePart, ...]


@dataclass(frozen=True)
class CueEnvelope:
    cue_id: str
    sender: str
    deliveries: tuple[Delivery, ...]
    schedule: timing.Schedule

    def target_connections(self) -> tuple[str, ...]:
        return tuple(d.connection_id for d in self.deliveries)


@dataclass(frozen=True)
class Designation:
    """What the sender pointed at; resolution applies precedence top-down."""

    algorithm_id: Optional[str] = None
    assignment_id: Optional[str] = None  # multi-role or fractional
    performers: frozenset[str] = frozenset()  # nickname checkboxes
    roles: frozenset[str] = frozenset()  # role-name checkboxes
    send_to_all: bool = False


class Performance:
    """One live instantiation of a venue.

    All state is guarded by one lock per performance; operations across
    performances never share mutable state.
    """

    def __init__(self, name: str, venue: Venue, store: ContentStore, clock: timing.Clock,
                 delay_budget_ms: int, seed: int, tz: str = "UTC"):
        self.name = name
        self.venue = venue
        self.store = store
        self.clock = clock
        self.delay_budget_ms = delay_budget_ms
        self.seed = seed
        self.rng = random.Random(seed)
        self.tz = ZoneInfo(tz)
        self.state = "live"
        self.roster: dict[str, Performer] = {}  # by connection id
        self.fraction_memory: dict[str, list[list[str]]] = {}  # assignment id -> nickname partition
        self.activity: list[ActivityEntry] = []
        self._lock = threading.RLock()
        log.info("performance %r instantiated from venue %r (seed %d)", name, venue.name, seed)

    # -- roster -----------------------------------------------------------

    def _require_live(self) -> None:
        if self.state != "live":
            raise PerformanceGoneError(f"performance {self.name!r} was destroyed")

    def join(self, nickname: str, role_name: str, connection_id: str,
             passcode: Optional[str] = None, local_ip: Optional[str] = None) -> Performer:
        with self._lock:
            self._require_live()
            role = self.venue.role_named(role_name)
            if role is None:
                raise JoinError(f"venue has no role {role_name!r}", code="unknown-role")
            if self.venue.passcode is not None and not self.venue.passcode.matches(passcode or ""):
                raise JoinError("wrong passcode", code="passcode")
            if "local-ip" in self.venue.join_requirements and not local_ip:
                raise JoinError("this venue requires a local IP to join", code="local-ip-required")
            if not nickname:
                raise JoinError("nickname required", code="nickname-required")
            if any(p.nickname == nickname for p in self.roster.values()):
                raise JoinError(f"nickname {nickname!r} already present", code="duplicate-nickname")
            cap = self.venue.capacity_of(role_name)
            if cap is not None:
                n = sum(1 for p in self.roster.values() if p.role_name == role_name)
                if n >= cap:
                    raise CapacityError(f"role {role_name!r} is full ({cap})")
            performer = Performer(nickname=nickname, role_name=role_name,
                                  connection_id=connection_id, local_ip=local_ip)
            self.roster[connection_id] = performer
            return performer

    def leave(self, connection_id: str) -> bool:
        """Remove a performer; returns True when this emptied (destroyed) the performance."""
        with self._lock:
            self._require_live()
            if connection_id not in self.roster:
                raise NotFoundError("no such connection in roster")
            del self.roster[connection_id]
            if not self.roster:
                self.state = "destroyed"
                log.info("performance %r destroyed (last performer left)", self.name)
                return True
            return False

    def performer(self, connection_id: str) -> Performer:
        try:
            return self.roster[connection_id]
        except KeyError:
            raise NotFoundError("no such connection in roster") from None

    def performer_named(self, nickname: str) -> Optional[Performer]:
        for p in self.roster.values():
            if p.nickname == nickname:
                return p
        return None

    def capabilities_of(self, performer: Performer) -> frozenset[Capability]:
        if performer.capability_overrides is not None:
            return performer.capability_overrides
        role = self.venue.role_named(performer.role_name)
        return role.capabilities if role else frozenset()

    def roster_snapshot(self) -> list[dict]:
        with self._lock:
            return [
                {
                    "nickname": p.nickname,
                    "role": p.role_name,
                    "capabilities": sorted(c.value for c in self.capabilities_of(p)),
                    "test-mode": p.test_mode,
                }
                for p in sorted(self.roster.values(), key=lambda p: p.nickname)
            ]

    # -- self-service operations -----------------------------------------

    def change_role(self, connection_id: str, new_role: str) -> Performer:
        with self._lock:
            self._require_live()
            p = self.performer(connection_id)
            self._require_capability(p, Capability.CHANGE_ROLE)
            if self.venue.role_named(new_role) is None:
                raise RejectedError(f"venue has no role {new_role!r}", code="unknown-role")
            cap = self.venue.capacity_of(new_role)
            if cap is not None:
                n = sum(1 for q in self.roster.values()
                        if q.role_name == new_role and q.connection_id != connection_id)
                if n >= cap:
                    raise CapacityError(f"role {new_role!r} is full ({cap})")
            p.role_name = new_role
            p.capability_overrides = None
            return p

    def change_functionality(self, connection_id: str, flags: frozenset[Capability]) -> Performer:
        with self._lock:
            self._require_live()
            p = self.performer(connection_id)
            self._require_capability(p, Capability.CHANGE_FUNCTIONALITY)
            p.capability_overrides = frozenset(flags)
            return p

    def set_test_mode(self, connection_id: str, on: bool) -> Performer:
        with self._lock:
            self._require_live()
            p = self.performer(connection_id)
            self._require_capability(p, Capability.TEST_FUNCTIONALITY)
            p.test_mode = bool(on)
            return p

    def _require_capability(self, p: Performer, cap: Capability) -> None:
        if cap not in self.capabilities_of(p):
            raise CapabilityError(f"{p.nickname} lacks {cap.value}")

    # -- fractions --------------------------------------------------------

    @staticmethod
    def _fraction_sizes(n: int, k: int) -> list[int]:
        base, rem = divmod(n, k)
        return [base + 1 if i < rem else base for i in range(k)]

    def resolve_fraction(self, assignment: FractionalAssignment) -> list[list[Performer]]:
        """Partition the target group into len(fractions) sets.

        Persistent mode keys membership on nickname so it survives a leave
        and rejoin; newcomers go to the smallest fraction. Dynamic mode draws
        a fresh shuffle from the performance RNG every call.
        """
        with self._lock:
            group = [p for p in self.roster.values()
                     if assignment.target is None or p.role_name in assignment.target]
            group.sort(key=lambda p: p.nickname)
            if not group:
                raise RoutingError("fraction target group is empty")
            k = len(assignment.fractions)
            if assignment.mode is FractionMode.DYNAMIC:
                shuffled = list(group)
                self.rng.shuffle(shuffled)
                return self._slice(shuffled, self._fraction_sizes(len(group), k))
            remembered = self.fraction_memory.get(assignment.id)
            if remembered is None:
                shuffled = list(group)
                self.rng.shuffle(shuffled)
                parts = self._slice(shuffled, self._fraction_sizes(len(group), k))
                self.fraction_memory[assignment.id] = [[p.nickname for p in part] for part in parts]
                return parts
            placed = {n for part in remembered for n in part}
            for p in group:
                if p.nickname not in placed:
                    smallest = min(remembered, key=len)
                    smallest.append(p.nickname)
                    placed.add(p.nickname)
            by_nick = {p.nickname: p for p in group}
            return [[by_nick[n] for n in part if n in by_nick] for part in remembered]

    @staticmethod
    def _slice(seq: list, sizes: list[int]) -> list[list]:
        out, i = [], 0
        for s in sizes:
            out.append(seq[i:i + s])
            i += s
        return out

    # -- routing ----------------------------------------------------------

    def resolve_targets(self, sender: Performer, designation: Designation,
                        content_id: Optional[str],
                        part_override: Optional[CuePart] = None) -> list[Delivery]:
        """Apply precedence, expand per-performer content, filter by capability.

        Precedence: algorithm > fractional > multi-role > performer checkboxes
        > role checkboxes > ALL. The result is per-receiver deliveries because
        assignments bind different content to different receivers and pairs
        degrade per receiver. ``part_override`` replaces object lookup for
        live sends (typed text, live text-to-speech).
        """
        with self._lock:
            if sender.test_mode:
                wanted = [(sender, content_id)]
            else:
                wanted = self._designated(sender, designation, content_id)
            deliveries: list[Delivery] = []
            reasons: list[str] = []
            for performer, cid in wanted:
                caps = self.capabilities_of(performer)
                if part_override is not None:
                    if part_override.receive in caps:
                        deliveries.append(Delivery(performer.connection_id, performer.nickname,
                                                   (part_override,)))
                    else:
                        reasons.append(f"{performer.nickname}: lacks {part_override.receive.value}")
                    continue
                if cid is None:
                    reasons.append(f"{performer.nickname}: no content bound")
                    continue
                obj = self.store.get(cid)
                parts = receivable_parts(caps, obj, self.store.get)
                if parts:
                    deliveries.append(Delivery(performer.connection_id, performer.nickname, tuple(parts)))
                else:
                    missing = sorted({p.receive.value for p in deliverable_parts(obj, self.store.get)})
                    reasons.append(f"{performer.nickname}: lacks {' and '.join(missing) or 'any receive flag'}")
            if not deliveries:
                raise RoutingError("no performer can receive this cue", details=reasons)
            return deliveries

    def _designated(self, sender: Performer, d: Designation,
                    content_id: Optional[str]) -> list[tuple[Performer, Optional[str]]]:
        if d.algorithm_id:
            alg = self.store.get(d.algorithm_id)
            if not isinstance(alg, AlgorithmObject) or alg.kind is not AlgorithmKind.DISTRIBUTION_ORGANIZATION:
                raise RejectedError("only distribution organizations route directly", code="bad-designation")
            out: list[tuple[Performer, Optional[str]]] = []
            for step in alg.steps:
                for p in self._tag_targets(step.target):
                    out.append((p, step.content_id))
            return out
        if d.assignment_id:
            obj = self.store.get(d.assignment_id)
            if isinstance(obj, FractionalAssignment):
                parts = self.resolve_fraction(obj)
                return [(p, obj.fractions[i]) for i, part in enumerate(parts) for p in part]
            if isinstance(obj, MultiRoleAssignment):
                if obj.venue_id != self.venue.id:
                    raise RejectedError("assignment targets a different venue", code="bad-designation")
                binding = obj.binding_map()
                return [(p, binding[p.role_name]) for p in self.roster.values()
                        if p.role_name in binding]
            raise RejectedError("designated assignment id is not an assignment", code="bad-designation")
        if d.performers:
            named = [p for p in self.roster.values() if p.nickname in d.performers]
            return [(p, content_id) for p in named]
        if d.roles:
            return [(p, content_id) for p in self.roster.values() if p.role_name in d.roles]
        if d.send_to_all:
            return [(p, content_id) for p in self.roster.values()]
        raise RejectedError("empty designation", code="bad-designation")

    def _tag_targets(self, tag: str) -> list[Performer]:
        if tag == "ALL":
            return list(self.roster.values())
        if tag.startswith("role:"):
            name = tag[len("role:"):]
            return [p for p in self.roster.values() if p.role_name == name]
        if tag.startswith("performer:"):
            name = tag[len("performer:"):]
            return [p for p in self.roster.values() if p.nickname == name]
        raise RejectedError(f"unknown target tag {tag!r}", code="bad-designation")

    # -- dispatch ---------------------------------------------------------

    def dispatch(self, connection_id: str, designation: Designation,
                 content_id: Optional[str] = None,
                 issue_ms: Optional[int] = None) -> tuple[CueEnvelope, ActivityEntry]:
        """Route one stored-content send: capability-check, resolve, schedule, log."""
        with self._lock:
            self._require_live()
            sender = self.performer(connection_id)
            primary = self.store.get(content_id) if content_id else None
            if designation.algorithm_id and primary is None:
                primary = self.store.get(designation.algorithm_id)
            elif designation.assignment_id and primary is None:
                primary = self.store.get(designation.assignment_id)
            if primary is None:
                raise RejectedError("nothing to send", code="bad-designation")
            if not sender.test_mode:
                self._require_capability(sender, send_capability_for(primary))
            deliveries = self.resolve_targets(sender, designation, content_id)
            verb = self._verb_for(primary, deliveries)
            name = getattr(primary, "name", "") or primary.id
            return self._finish_dispatch(sender, deliveries, verb, name, issue_ms)

    def dispatch_live_tts(self, connection_id: str, designation: Designation, text: str,
                          language: str = "en-US",
                          issue_ms: Optional[int] = None) -> tuple[CueEnvelope, ActivityEntry]:
        """Real-time typed text delivered as rendered speech audio.

        The rendered audio is stored like any pre-saved speech object, so it
        can be reused later, but receipt is gated on the live flag.
        """
        with self._lock:
            self._require_live()
            sender = self.performer(connection_id)
            if not sender.test_mode:
                self._require_capability(sender, Capability.SEND_TTS_LIVE)
            obj = self.store.save_tts(text, language)
            part = CuePart(obj.id, "audio", Capability.RECEIVE_TTS_LIVE, "play tts", obj.name)
            deliveries = self.resolve_targets(sender, designation, None, part_override=part)
            return self._finish_dispatch(sender, deliveries, "play tts", obj.name, issue_ms)

    def dispatch_live_text(self, connection_id: str, designation: Designation, text: str,
                           issue_ms: Optional[int] = None) -> tuple[CueEnvelope, ActivityEntry]:
        """Chatroom-style typed text; nothing is stored."""
        with self._lock:
            self._require_live()
            sender = self.performer(connection_id)
            if not sender.test_mode:
                self._require_capability(sender, Capability.SEND_TEXT)
            if not text:
                raise RejectedError("text must be non-empty")
            part = CuePart(None, "text", Capability.RECEIVE_TEXT, "show text", text,
                           inline={"text": text})
            deliveries = self.resolve_targets(sender, designation, None, part_override=part)
            return self._finish_dispatch(sender, deliveries, "show text", text, issue_ms)

    def _finish_dispatch(self, sender: Performer, deliveries: list[Delivery], verb: str,
                         content_name: str, issue_ms: Optional[int]) -> tuple[CueEnvelope, ActivityEntry]:
        issue = issue_ms if issue_ms is not None else self.clock.now_ms()
        schedule = timing.schedule_cue(issue, self.delay_budget_ms)
        envelope = CueEnvelope(
            cue_id=uuid.uuid4().hex,
            sender=sender.nickname,
            deliveries=tuple(deliveries),
            schedule=schedule,
        )
        participants = frozenset({sender.nickname} | {d.nickname for d in deliveries})
        ts = max(issue, self.activity[-1].timestamp_ms) if self.activity else issue
        entry = ActivityEntry(
            timestamp_ms=ts,
            sender=sender.nickname,
            verb=verb,
            content_name=content_name,
            participants=participants,
            test=sender.test_mode,
        )
        self.activity.append(entry)
        return envelope, entry

    @staticmethod
    def _verb_for(primary: DomainObject, deliveries: list[Delivery]) -> str:
        if isinstance(primary, Collection) and primary.kind is CollectionKind.AUDIO_IMAGE_PAIR:
            return "send pair"
        if isinstance(primary, MultiRoleAssignment):
            return "send assignment"
        if isinstance(primary, FractionalAssignment):
            return "send fraction"
        if isinstance(primary, AlgorithmObject):
            return "run algorithm"
        for d in deliveries:
            if d.parts:
                return d.parts[0].verb
        return "send"

    def log_osc_send(self, connection_id: str, address: str) -> ActivityEntry:
        with self._lock:
            sender = self.performer(connection_id)
            ts = self.clock.now_ms()
            if self.activity:
                ts = max(ts, self.activity[-1].timestamp_ms)
            entry = ActivityEntry(
                timestamp_ms=ts, sender=sender.nickname, verb="send osc",
                content_name=address, participants=frozenset({sender.nickname}),
            )
            self.activity.append(entry)
            return entry

    # -- logs -------------------------------------------------------------

    def global_log(self) -> list[ActivityEntry]:
        with self._lock:
            return list(self.activity)

    def performer_log(self, nickname: str) -> list[ActivityEntry]:
        """Only the entries this performer sent or received."""
        with self._lock:
            return [e for e in self.activity if nickname in e.participants]

    def display_time(self, ts_ms: int) -> str:
        return datetime.fromtimestamp(ts_ms / 1000.0, tz=timezone.utc).astimezone(self.tz).strftime("%H:%M")

    def display_line(self, entry: ActivityEntry) -> str:
        return f"{entry.line()}  {self.display_time(entry.timestamp_ms)}"

    # -- timed organization ----------------------------------------------

    def expand_timed(self, algorithm: AlgorithmObject, issue_ms: int) -> list[tuple[int, str, str]]:
        """(fire time, content id, target tag) per timed step.

        Timers fire once after their duration; metronomes contribute their
        first anchored tick (repetition is the caller's loop).
        """
        if algorithm.kind is not AlgorithmKind.TIMED_ORGANIZATION:
            raise RejectedError("not a timed organization")
        out = []
        for t in algorithm.timed_steps:
            trigger = self.store.get(t.trigger_id)
            if trigger.kind is AlgorithmKind.TIMER:
                fire = timing.timer_fire(issue_ms, trigger.duration_ms)
            else:
                fire = timing.metronome_ticks(issue_ms, trigger.interval_ms, 1)[0]
            out.append((fire, t.step.content_id, t.step.target))
        return out


class VenueRuntime:
    """Registry of live performances plus the archive of final logs."""

    def __init__(self, store: ContentStore, clock: Optional[timing.Clock] = None,
                 delay_budget_ms: int = timing.DEFAULT_DELAY_BUDGET_MS,
                 seed: Optional[int] = None, tz: str = "UTC"):
        self.store = store
        self.clock = clock or timing.SystemClock()
        self.delay_budget_ms = delay_budget_ms
        self.tz = tz
        self._seed_source = random.Random(seed)
        self._lock = threading.RLock()
        self._live: dict[str, Performance] = {}
        self._final_logs: dict[str, list[ActivityEntry]] = {}

    def start_performance(self, venue_id: str, performance_name: str, nickname: str,
                          role_name: str, connection_id: str, passcode: Optional[str] = None,
                          local_ip: Optional[str] = None) -> Performance:
        with self._lock:
            venue = self.store.get(venue_id)
            if not isinstance(venue, Venue):
                raise NotFoundError(f"{venue_id} is not a venue")
            if performance_name in self._live:
                raise RejectedError(
                    f"a live performance named {performance_name!r} already exists",
                    code="duplicate-name",
                )
            seed = self._seed_source.getrandbits(32)
            perf = Performance(performance_name, venue, self.store, self.clock,
                               self.delay_budget_ms, seed, self.tz)
            # join before registering: a failed first join must not leak a live entry
            perf.join(nickname, role_name, connection_id, passcode=passcode, local_ip=local_ip)
            self._live[performance_name] = perf
            return perf

    def get(self, performance_name: str) -> Performance:
        with self._lock:
            perf = self._live.get(performance_name)
            if perf is None:
                if performance_name in self._final_logs:
                    raise PerformanceGoneError(f"performance {performance_name!r} was destroyed")
                raise NotFoundError(f"no live performance named {performance_name!r}")
            return perf

    def join(self, performance_name: str, nickname: str, role_name: str, connection_id: str,
             passcode: Optional[str] = None, local_ip: Optional[str] = None) -> Performance:
        perf = self.get(performance_name)
        perf.join(nickname, role_name, connection_id, passcode=passcode, local_ip=local_ip)
        return perf

    def leave(self, performance_name: str, connection_id: str) -> bool:
        with self._lock:
            perf = self.get(performance_name)
            destroyed = perf.leave(connection_id)
            if destroyed:
                self._final_logs[performance_name] = perf.global_log()
                del self._live[performance_name]
            return destroyed

    def live_performances(self) -> list[dict]:
        """Join-menu listing."""
        with self._lock:
            return [
                {
                    "name": p.name,
                    "venue": p.venue.name,
                    "performers": len(p.roster),
                    "roles": [s.role.name for s in p.venue.roles],
                }
                for _, p in sorted(self._live.items())
            ]

    def final_log(self, performance_name: str) -> list[ActivityEntry]:
        with self._lock:
            if performance_name in self._final_logs:
                return list(self._final_logs[performance_name])
            raise NotFoundError(f"no archived log for {performance_name!r}")
