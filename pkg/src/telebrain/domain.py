"""Domain value types shared by every other module.

All types here are immutable dataclasses; mutation happens only through the
content store. Serialization is canonical UTF-8 JSON with kebab-case field
names, used identically by persistence, the wire protocol, and config files.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping, Optional, Union

FORMAT_VERSION = 1


class ContentKind(str, Enum):
    AUDIO_WEB = "audio-web"
    AUDIO_UPLOAD = "audio-upload"
    AUDIO_TTS = "audio-tts"
    IMAGE_WEB = "image-web"
    IMAGE_UPLOAD = "image-upload"
    TELEPROMPT = "teleprompt"


AUDIO_KINDS = frozenset({ContentKind.AUDIO_WEB, ContentKind.AUDIO_UPLOAD, ContentKind.AUDIO_TTS})
IMAGE_KINDS = frozenset({ContentKind.IMAGE_WEB, ContentKind.IMAGE_UPLOAD})


class CollectionKind(str, Enum):
    FOLDER = "folder"
    AUDIO_IMAGE_PAIR = "audio-image-pair"
    AUDIO_SENTENCE = "audio-sentence"
    AUDIO_LAYER = "audio-layer"
    IMAGE_PHRASE = "image-phrase"


class Capability(str, Enum):
    """Per-role send/receive/visibility switches.

    Every checkbox a role definition can flip is one token here; the wire
    protocol carries the full set as a name->bool map.
    """

    SEND_TEXT = "send-text"
    SEND_TTS_LIVE = "send-tts-live"
    SEND_IMAGE = "send-image"
    SEND_AUDIO = "send-audio"
    SEND_ASSOCIATION = "send-association"
    SEND_FRACTION = "send-fraction"
    SEND_OSC = "send-osc"
    SEND_ALGORITHM = "send-algorithm"
    RECEIVE_TEXT = "receive-text"
    RECEIVE_TTS_LIVE = "receive-tts-live"
    RECEIVE_IMAGE = "receive-image"
    RECEIVE_AUDIO = "receive-audio"
    RECEIVE_INTERFACE = "receive-interface"
    RECEIVE_OSC = "receive-osc"
    SHOW_MENU = "show-menu"
    SHOW_TITLE = "show-title"
    ROLE_LIST = "role-list"
    PERFORMER_LIST = "performer-list"
    PERFORMER_ACTIVITY_LOG = "performer-activity-log"
    GLOBAL_ACTIVITY_LOG = "global-activity-log"
    CHANGE_ROLE = "change-role"
    CHANGE_INTERFACE = "change-interface"
    CHANGE_FUNCTIONALITY = "change-functionality"
    TEST_FUNCTIONALITY = "test-functionality"


ALL_CAPABILITIES = frozenset(Capability)


class FractionMode(str, Enum):
    PERSISTENT = "persistent"
    DYNAMIC = "dynamic"


class WidgetKind(str, Enum):
    BUTTON = "button"
    PULLDOWN = "pulldown"
    TEXT_INPUT = "text-input"
    DISPLAY_AREA = "display-area"


class AlgorithmKind(str, Enum):
    TIMER = "timer"
    METRONOME = "metronome"
    OSC_BINDING = "osc-binding"
    TIMED_ORGANIZATION = "timed-organization"
    DISTRIBUTION_ORGANIZATION = "distribution-organization"


JOIN_REQUIREMENTS = frozenset({"nickname", "local-ip", "passcode"})


@dataclass(frozen=True)
class LockRecord:
    """Salted passcode digest guarding an object against edits and deletion."""

    salt: str
    digest: str

    @classmethod
    def create(cls, passcode: str) -> "LockRecord":
        salt = secrets.token_hex(8)
        return cls(salt=salt, digest=cls._digest(salt, passcode))

    def matches(self, passcode: str) -> bool:
        return secrets.compare_digest(self.digest, self._digest(self.salt, passcode))

    @staticmethod
    def _digest(salt: str, passcode: str) -> str:
        return hashlib.sha256((salt + passcode).encode("utf-8")).hexdigest()

    def to_dict(self) -> dict:
        return {"salt": self.salt, "digest": self.digest}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LockRecord":
        return cls(salt=d["salt"], digest=d["digest"])


@dataclass(frozen=True)
class TelepromptSpec:
    """Visually formatted text: the display parameters travel with the text."""

    text: str
    font: str = "sans-serif"
    size_pt: int = 24
    text_color: tuple[int, int, int] = (255, 255, 255)
    background_color: tuple[int, int, int] = (0, 0, 0)

    def to_dict(self) -> dict:
        return {
            "text": self.text,
            "font": self.font,
            "size": self.size_pt,
            "text-color": list(self.text_color),
            "background-color": list(self.background_color),
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TelepromptSpec":
        return cls(
            text=d["text"],
            font=d.get("font", "sans-serif"),
            size_pt=d.get("size", 24),
            text_color=tuple(d.get("text-color", (255, 255, 255))),
            background_color=tuple(d.get("background-color", (0, 0, 0))),
        )


@dataclass(frozen=True)
class ContentObject:
    """One unit of performable media: audio, image, or teleprompt text.

    ``media`` is a blob id (local copies), a resolved URL (web kinds before
    copying), or a :class:`TelepromptSpec` for the teleprompt kind.
    ``duration_ms`` is set for audio kinds once the media has been ingested.
    """

    id: str
    kind: ContentKind
    name: str
    media: Union[str, TelepromptSpec, None] = None
    duration_ms: Optional[int] = None
    lock: Optional[LockRecord] = None

    def is_audio(self) -> bool:
        return self.kind in AUDIO_KINDS

    def is_image(self) -> bool:
        return self.kind in IMAGE_KINDS

    def to_dict(self) -> dict:
        media: Any
        if isinstance(self.media, TelepromptSpec):
            media = self.media.to_dict()
        else:
            media = self.media
        return _doc(
            {
                "id": self.id,
                "type": "content",
                "kind": self.kind.value,
                "name": self.name,
                "media": media,
                "duration": self.duration_ms,
                "lock": self.lock.to_dict() if self.lock else None,
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "ContentObject":
        kind = ContentKind(d["kind"])
        media = d.get("media")
        if kind is ContentKind.TELEPROMPT and isinstance(media, Mapping):
            media = TelepromptSpec.from_dict(media)
        return cls(
            id=d["id"],
            kind=kind,
            name=d["name"],
            media=media,
            duration_ms=d.get("duration"),
            lock=_opt_lock(d),
        )


@dataclass(frozen=True)
class LayerEntry:
    """One voice of an audio layer: what plays, when, and how loud."""

    audio_id: str
    start_ms: int = 0
    volume: float = 1.0

    def to_dict(self) -> dict:
        return {"audio": self.audio_id, "start": self.start_ms, "volume": self.volume}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "LayerEntry":
        return cls(audio_id=d["audio"], start_ms=d.get("start", 0), volume=d.get("volume", 1.0))


@dataclass(frozen=True)
class Collection:
    """A kind-specific grouping of content.

    Member layout per kind:
      folder            unordered set of content/collection ids
      audio-image-pair  (audio id, image id)
      audio-sentence    ordered audio ids; ``offsets_ms`` is computed at render
      audio-layer       ordered :class:`LayerEntry` list
      image-phrase      ordered image ids

    Sentences and layers carry ``rendered_media`` (a blob id) once saved, at
    which point they can be sent anywhere a plain audio object can.
    """

    id: str
    kind: CollectionKind
    members: tuple
    name: str = ""
    offsets_ms: Optional[tuple[int, ...]] = None
    rendered_media: Optional[str] = None
    rendered_duration_ms: Optional[int] = None
    lock: Optional[LockRecord] = None

    def member_ids(self) -> tuple[str, ...]:
        if self.kind is CollectionKind.AUDIO_LAYER:
            return tuple(e.audio_id for e in self.members)
        return tuple(self.members)

    def to_dict(self) -> dict:
        if self.kind is CollectionKind.AUDIO_LAYER:
            members: Any = [e.to_dict() for e in self.members]
        elif self.kind is CollectionKind.FOLDER:
            members = sorted(self.members)
        else:
            members = list(self.members)
        return _doc(
            {
                "id": self.id,
                "type": "collection",
                "kind": self.kind.value,
                "name": self.name,
                "members": members,
                "offsets": list(self.offsets_ms) if self.offsets_ms is not None else None,
                "rendered-media": self.rendered_media,
                "rendered-duration": self.rendered_duration_ms,
                "lock": self.lock.to_dict() if self.lock else None,
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Collection":
        kind = CollectionKind(d["kind"])
        raw = d.get("members", [])
        if kind is CollectionKind.AUDIO_LAYER:
            members: tuple = tuple(LayerEntry.from_dict(m) for m in raw)
        else:
            members = tuple(raw)
        offsets = d.get("offsets")
        return cls(
            id=d["id"],
            kind=kind,
            members=members,
            name=d.get("name", ""),
            offsets_ms=tuple(offsets) if offsets is not None else None,
            rendered_media=d.get("rendered-media"),
            rendered_duration_ms=d.get("rendered-duration"),
            lock=_opt_lock(d),
        )


@dataclass(frozen=True)
class Role:
    """A capability-flagged performer type."""

    name: str
    capabilities: frozenset[Capability] = frozenset()
    audio_required: bool = False

    def can(self, cap: Capability) -> bool:
        return cap in self.capabilities

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "capabilities": sorted(c.value for c in self.capabilities),
            "audio-required": self.audio_required,
        }

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Role":
        return cls(
            name=d["name"],
            capabilities=frozenset(Capability(c) for c in d.get("capabilities", [])),
            audio_required=d.get("audio-required", False),
        )


@dataclass(frozen=True)
class RoleSlot:
    role: Role
    capacity: Optional[int] = None

    def to_dict(self) -> dict:
        d = self.role.to_dict()
        d["capacity"] = self.capacity
        return d

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "RoleSlot":
        return cls(role=Role.from_dict(d), capacity=d.get("capacity"))


@dataclass(frozen=True)
class Venue:
    """A reusable performance-architecture template.

    Instantiating a venue produces a live performance; the venue itself only
    declares the roles on offer, per-role head counts, and what a performer
    must present to join.
    """

    id: str
    name: str
    roles: tuple[RoleSlot, ...] = ()
    passcode: Optional[LockRecord] = None
    join_requirements: frozenset[str] = frozenset({"nickname"})

    def role_named(self, name: str) -> Optional[Role]:
        for slot in self.roles:
            if slot.role.name == name:
                return slot.role
        return None

    def capacity_of(self, role_name: str) -> Optional[int]:
        for slot in self.roles:
            if slot.role.name == role_name:
                return slot.capacity
        return None

    def to_dict(self) -> dict:
        return _doc(
            {
                "id": self.id,
                "type": "venue",
                "name": self.name,
                "roles": [s.to_dict() for s in self.roles],
                "passcode": self.passcode.to_dict() if self.passcode else None,
                "join-requirements": sorted(self.join_requirements),
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "Venue":
        pc = d.get("passcode")
        return cls(
            id=d["id"],
            name=d["name"],
            roles=tuple(RoleSlot.from_dict(s) for s in d.get("roles", [])),
            passcode=LockRecord.from_dict(pc) if pc else None,
            join_requirements=frozenset(d.get("join-requirements", ["nickname"])),
        )


@dataclass(frozen=True)
class InterfaceElement:
    widget: WidgetKind
    bound_target: str

    def to_dict(self) -> dict:
        return {"widget": self.widget.value, "target": self.bound_target}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "InterfaceElement":
        return cls(widget=WidgetKind(d["widget"]), bound_target=d["target"])


@dataclass(frozen=True)
class InterfaceObject:
    """Ordered widgets bound to stored content, assignments, or algorithms."""

    id: str
    elements: tuple[InterfaceElement, ...] = ()
    name: str = ""
    lock: Optional[LockRecord] = None

    def to_dict(self) -> dict:
        return _doc(
            {
                "id": self.id,
                "type": "interface",
                "name": self.name,
                "elements": [e.to_dict() for e in self.elements],
                "lock": self.lock.to_dict() if self.lock else None,
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "InterfaceObject":
        return cls(
            id=d["id"],
            elements=tuple(InterfaceElement.from_dict(e) for e in d.get("elements", [])),
            name=d.get("name", ""),
            lock=_opt_lock(d),
        )


@dataclass(frozen=True)
class MultiRoleAssignment:
    """Distinct content bound to each role of one venue, sent in one gesture."""

    id: str
    venue_id: str
    bindings: tuple[tuple[str, str], ...]  # (role name, content/collection id), ordered
    name: str = ""
    lock: Optional[LockRecord] = None

    def binding_map(self) -> dict[str, str]:
        return dict(self.bindings)

    def to_dict(self) -> dict:
        return _doc(
            {
                "id": self.id,
                "type": "multi-role-assignment",
                "name": self.name,
                "venue": self.venue_id,
                "bindings": {role: cid for role, cid in self.bindings},
                "lock": self.lock.to_dict() if self.lock else None,
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "MultiRoleAssignment":
        return cls(
            id=d["id"],
            venue_id=d["venue"],
            bindings=tuple(sorted(d.get("bindings", {}).items())),
            name=d.get("name", ""),
            lock=_opt_lock(d),
        )


@dataclass(frozen=True)
class FractionalAssignment:
    """Distinct content for each fraction of a partitioned performer group.

    ``target`` is None for ALL performers, otherwise a role-name set. The
    fraction count is the length of ``fractions``; persistent mode keeps the
    partition for the whole performance, dynamic mode redraws it per send.
    """

    id: str
    mode: FractionMode
    fractions: tuple[str, ...]  # content/collection id per fraction
    target: Optional[frozenset[str]] = None
    name: str = ""
    lock: Optional[LockRecord] = None

    def to_dict(self) -> dict:
        return _doc(
            {
                "id": self.id,
                "type": "fractional-assignment",
                "name": self.name,
                "mode": self.mode.value,
                "target": sorted(self.target) if self.target is not None else "ALL",
                "fractions": list(self.fractions),
                "lock": self.lock.to_dict() if self.lock else None,
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "FractionalAssignment":
        target = d.get("target", "ALL")
        return cls(
            id=d["id"],
            mode=FractionMode(d["mode"]),
            fractions=tuple(d.get("fractions", [])),
            target=None if target == "ALL" else frozenset(target),
            name=d.get("name", ""),
            lock=_opt_lock(d),
        )


@dataclass(frozen=True)
class DistributionStep:
    """One routed send: a content/collection/assignment id plus a target tag.

    Target tags: "ALL", "role:<name>", or "performer:<nickname>".
    """

    content_id: str
    target: str = "ALL"

    def to_dict(self) -> dict:
        return {"content": self.content_id, "target": self.target}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "DistributionStep":
        return cls(content_id=d["content"], target=d.get("target", "ALL"))


@dataclass(frozen=True)
class TimedStep:
    trigger_id: str  # timer or metronome algorithm id
    step: DistributionStep

    def to_dict(self) -> dict:
        return {"trigger": self.trigger_id, "step": self.step.to_dict()}

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "TimedStep":
        return cls(trigger_id=d["trigger"], step=DistributionStep.from_dict(d["step"]))


@dataclass(frozen=True)
class AlgorithmObject:
    """Timers, metronomes, OSC bindings, and organization programs.

    A single type with kind-specific fields; unrelated fields stay None/empty.
    """

    id: str
    kind: AlgorithmKind
    name: str = ""
    duration_ms: Optional[int] = None  # timer
    interval_ms: Optional[int] = None  # metronome
    synchronized: bool = True  # metronome: anchored to server vs local clock
    direction: Optional[str] = None  # osc-binding: "in" | "out"
    address_pattern: Optional[str] = None  # osc-binding
    bound_target: Optional[str] = None  # osc-binding
    timed_steps: tuple[TimedStep, ...] = ()  # timed-organization
    steps: tuple[DistributionStep, ...] = ()  # distribution-organization
    lock: Optional[LockRecord] = None

    def to_dict(self) -> dict:
        return _doc(
            {
                "id": self.id,
                "type": "algorithm",
                "kind": self.kind.value,
                "name": self.name,
                "duration": self.duration_ms,
                "interval": self.interval_ms,
                "synchronized": self.synchronized,
                "direction": self.direction,
                "address": self.address_pattern,
                "bound-target": self.bound_target,
                "timed-steps": [t.to_dict() for t in self.timed_steps],
                "steps": [s.to_dict() for s in self.steps],
                "lock": self.lock.to_dict() if self.lock else None,
            }
        )

    @classmethod
    def from_dict(cls, d: Mapping[str, Any]) -> "AlgorithmObject":
        return cls(
            id=d["id"],
            kind=AlgorithmKind(d["kind"]),
            name=d.get("name", ""),
            duration_ms=d.get("duration"),
            interval_ms=d.get("interval"),
            synchronized=d.get("synchronized", True),
            direction=d.get("direction"),
            address_pattern=d.get("address"),
            bound_target=d.get("bound-target"),
            timed_steps=tuple(TimedStep.from_dict(t) for t in d.get("timed-steps", [])),
            steps=tuple(DistributionStep.from_dict(s) for s in d.get("steps", [])),
            lock=_opt_lock(d),
        )


DomainObject = Union[
    ContentObject,
    Collection,
    Venue,
    InterfaceObject,
    MultiRoleAssignment,
    FractionalAssignment,
    AlgorithmObject,
]

_TYPE_TAGS = {
    "content": ContentObject,
    "collection": Collection,
    "venue": Venue,
    "interface": InterfaceObject,
    "multi-role-assignment": MultiRoleAssignment,
    "fractional-assignment": FractionalAssignment,
    "algorithm": AlgorithmObject,
}


def object_from_dict(d: Mapping[str, Any]) -> DomainObject:
    """Reconstruct any stored object from its canonical document."""
    tag = d.get("type")
    cls = _TYPE_TAGS.get(tag)
    if cls is None:
        raise ValueError(f"unknown object type tag: {tag!r}")
    return cls.from_dict(d)


def _doc(d: dict) -> dict:
    d["format-version"] = FORMAT_VERSION
    return d


def _opt_lock(d: Mapping[str, Any]) -> Optional[LockRecord]:
    lock = d.get("lock")
    return LockRecord.from_dict(lock) if lock else None


def _rgb_ok(c) -> bool:
    return (
        isinstance(c, (tuple, list))
        and len(c) == 3
        and all(isinstance(v, int) and 0 <= v <= 255 for v in c)
    )


def validate(obj) -> list[str]:
    """Collect every invariant violation of *obj*; empty list means ok.

    Violations are data, not failures: callers decide whether to reject.
    Cross-object references (member ids, venue bindings) are checked by the
    store at save time, not here.
    """
    out: list[str] = []
    if isinstance(obj, ContentObject):
        _validate_content(obj, out)
    elif isinstance(obj, TelepromptSpec):
        _validate_teleprompt(obj, out)
    elif isinstance(obj, Collection):
        _validate_collection(obj, out)
    elif isinstance(obj, Role):
        _validate_role(obj, out)
    elif isinstance(obj, Venue):
        _validate_venue(obj, out)
    elif isinstance(obj, InterfaceObject):
        if not obj.id:
            out.append("interface: id required")
    elif isinstance(obj, MultiRoleAssignment):
        if not obj.bindings:
            out.append("multi-role assignment: at least one role binding")
    elif isinstance(obj, FractionalAssignment):
        _validate_fraction(obj, out)
    elif isinstance(obj, AlgorithmObject):
        _validate_algorithm(obj, out)
    else:
        out.append(f"unknown domain type: {type(obj).__name__}")
    return out


def _validate_content(obj: ContentObject, out: list[str]) -> None:
    if not obj.name:
        out.append("content: name non-empty")
    if obj.kind in AUDIO_KINDS:
        if obj.duration_ms is not None and obj.duration_ms <= 0:
            out.append("content: audio duration > 0")
    if obj.kind is ContentKind.TELEPROMPT:
        if isinstance(obj.media, TelepromptSpec):
            out.extend(validate(obj.media))
        elif obj.media is not None:
            out.append("content: teleprompt carries a teleprompt spec, not a media blob")
        if obj.duration_ms is not None:
            out.append("content: teleprompt has no duration")
    if obj.kind in IMAGE_KINDS and obj.duration_ms is not None:
        out.append("content: image has no duration")


def _validate_teleprompt(obj: TelepromptSpec, out: list[str]) -> None:
    if not obj.text:
        out.append("teleprompt: text non-empty")
    if obj.size_pt <= 0:
        out.append("teleprompt: size > 0")
    if not _rgb_ok(obj.text_color):
        out.append("teleprompt: text color valid 8-bit RGB")
    if not _rgb_ok(obj.background_color):
        out.append("teleprompt: background color valid 8-bit RGB")


def _validate_collection(obj: Collection, out: list[str]) -> None:
    k = obj.kind
    if k is CollectionKind.AUDIO_IMAGE_PAIR:
        if len(obj.members) != 2:
            out.append("pair: exactly one audio and one image member")
    elif k is CollectionKind.AUDIO_SENTENCE:
        if not obj.members:
            out.append("sentence: at least one member")
        if obj.offsets_ms is not None:
            if len(obj.offsets_ms) != len(obj.members):
                out.append("sentence: offset list length equals member list length")
            elif obj.offsets_ms:
                if obj.offsets_ms[0] != 0:
                    out.append("sentence: offsets start at 0")
                if any(b < a for a, b in zip(obj.offsets_ms, obj.offsets_ms[1:])):
                    out.append("sentence: offsets nondecreasing")
    elif k is CollectionKind.AUDIO_LAYER:
        if not obj.members:
            out.append("layer: at least one entry")
        for i, entry in enumerate(obj.members):
            if not (0.0 <= entry.volume <= 1.0):
                out.append(f"layer entry {i}: volume in [0,1]")
            if entry.start_ms < 0:
                out.append(f"layer entry {i}: start time >= 0")
    elif k is CollectionKind.IMAGE_PHRASE:
        if not obj.members:
            out.append("phrase: at least one member")


def _validate_role(obj: Role, out: list[str]) -> None:
    if not obj.name:
        out.append("role: name non-empty")
    for cap in obj.capabilities:
        if cap not in ALL_CAPABILITIES:
            out.append(f"role: unknown capability {cap!r}")


def _validate_venue(obj: Venue, out: list[str]) -> None:
    if not obj.name:
        out.append("venue: name non-empty")
    if not obj.roles:
        out.append("venue: at least one role")
    names = [s.role.name for s in obj.roles]
    for dup in sorted({n for n in names if names.count(n) > 1}):
        out.append(f"venue: duplicate role name {dup!r}")
    for slot in obj.roles:
        out.extend(validate(slot.role))
        if slot.capacity is not None and slot.capacity < 1:
            out.append(f"venue: role {slot.role.name!r} capacity >= 1")
    extra = obj.join_requirements - JOIN_REQUIREMENTS
    if extra:
        out.append(f"venue: unknown join requirements {sorted(extra)}")


def _validate_fraction(obj: FractionalAssignment, out: list[str]) -> None:
    if len(obj.fractions) < 2:
        out.append("fractional assignment: at least 2 fractions")
    if obj.target is not None and not obj.target:
        out.append("fractional assignment: role target set non-empty (use ALL instead)")


def _validate_algorithm(obj: AlgorithmObject, out: list[str]) -> None:
    k = obj.kind
    if k is AlgorithmKind.TIMER:
        if obj.duration_ms is None or obj.duration_ms <= 0:
            out.append("timer: duration > 0")
    elif k is AlgorithmKind.METRONOME:
        if obj.interval_ms is None or obj.interval_ms <= 0:
            out.append("metronome: interval > 0")
    elif k is AlgorithmKind.OSC_BINDING:
        if obj.direction not in ("in", "out"):
            out.append("osc binding: direction is 'in' or 'out'")
        if not obj.address_pattern or not obj.address_pattern.startswith("/"):
            out.append("osc binding: address pattern begins with '/'")
    elif k is AlgorithmKind.TIMED_ORGANIZATION:
        if not obj.timed_steps:
            out.append("timed organization: at least one trigger/step")
    elif k is AlgorithmKind.DISTRIBUTION_ORGANIZATION:
        if not obj.steps:
            out.append("distribution organization: at least one step")
