"""Client-server message set and its canonical JSON framing.

Frames are UTF-8 JSON text with three fixed top-level fields (type, seq,
payload); anything else a peer adds is preserved through a round trip so old
servers and new clients can coexist. Serialization is canonical (sorted keys,
no spaces) so golden frames are byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Mapping, Optional

from .domain import Capability, Collection, ContentObject, InterfaceObject, TelepromptSpec
from .errors import ProtocolError, TelebrainError
from .venue import CueEnvelope, Delivery

MESSAGE_TYPES = frozenset({
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
})


@dataclass(frozen=True)
class WireMessage:
    type: str
    seq: int
    payload: dict
    extra: dict = field(default_factory=dict)  # unknown top-level fields, kept verbatim

    def __post_init__(self):
        if self.type not in MESSAGE_TYPES:
            raise ProtocolError(f"unknown message type {self.type!r}", code="unknown-type")
        if not isinstance(self.seq, int) or self.seq < 1:
            raise ProtocolError("seq must be a positive integer")


def serialize(msg: WireMessage) -> str:
    doc = dict(msg.extra)
    doc.update({"type": msg.type, "seq": msg.seq, "payload": msg.payload})
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def deserialize(frame: str | bytes) -> WireMessage:
    try:
        doc = json.loads(frame)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ProtocolError(f"malformed frame: {e}", code="malformed") from None
    if not isinstance(doc, dict):
        raise ProtocolError("frame must be a JSON object", code="malformed")
    try:
        mtype, seq = doc["type"], doc["seq"]
    except KeyError as e:
        raise ProtocolError(f"frame missing {e.args[0]!r}", code="malformed") from None
    payload = doc.get("payload", {})
    if not isinstance(payload, dict):
        raise ProtocolError("payload must be a JSON object", code="malformed")
    extra = {k: v for k, v in doc.items() if k not in ("type", "seq", "payload")}
    return WireMessage(type=mtype, seq=seq, payload=payload, extra=extra)


@dataclass(frozen=True)
class SeqGap:
    expected: int
    got: int


class SeqTracker:
    """Per-connection, per-direction sequence check.

    Gaps are reported and tolerated; regressions are protocol violations
    (the one class of error that may close a connection).
    """

    def __init__(self):
        self.last: Optional[int] = None
        self.gaps: list[SeqGap] = []

    def observe(self, seq: int) -> Optional[SeqGap]:
        if self.last is not None and seq <= self.last:
            raise ProtocolError(f"seq regression: {seq} after {self.last}", code="seq-regression")
        expected = 1 if self.last is None else self.last + 1
        self.last = seq
        if seq != expected:
            gap = SeqGap(expected=expected, got=seq)
            self.gaps.append(gap)
            return gap
        return None


class SeqSource:
    def __init__(self):
        self._n = 0

    def next(self) -> int:
        self._n += 1
        return self._n


def capability_map(caps) -> dict[str, bool]:
    """Full flag map; the client renders controls straight from this."""
    have = {c.value if isinstance(c, Capability) else c for c in caps}
    return {c.value: c.value in have for c in Capability}


def error_message(exc: TelebrainError, seq: int) -> WireMessage:
    payload: dict[str, Any] = {"code": exc.code, "message": str(exc)}
    if exc.details is not None:
        payload["details"] = exc.details
    return WireMessage(type="error", seq=seq, payload=payload)


# -- cue frames -----------------------------------------------------------


def _part_descriptor(part, store) -> dict:
    """Self-contained description of one cue part.

    Audio and images are referenced by blob URL (pull-based fetch before the
    execute-at deadline); teleprompt and live text travel inline.
    """
    d: dict[str, Any] = {
        "content": part.content_id,
        "kind": part.kind,
        "name": part.name,
        "verb": part.verb,
    }
    if part.inline is not None:
        d.update(part.inline)
        return d
    obj = store.get(part.content_id)
    if isinstance(obj, ContentObject):
        if obj.is_audio():
            d["url"] = f"/blob/{obj.media}"
            d["duration"] = obj.duration_ms
        elif obj.is_image():
            d["url"] = f"/blob/{obj.media}"
        elif isinstance(obj.media, TelepromptSpec):
            d["text"] = obj.media.to_dict()
    elif isinstance(obj, Collection):
        if part.kind == "audio":
            d["url"] = f"/blob/{obj.rendered_media}"
            d["duration"] = obj.rendered_duration_ms
            if obj.offsets_ms is not None:
                d["offsets"] = list(obj.offsets_ms)
                d["members"] = list(obj.members)
        elif part.kind == "image-phrase":
            d["images"] = [
                {"content": mid, "name": store.get(mid).name, "url": f"/blob/{store.get(mid).media}"}
                for mid in obj.members
            ]
    elif isinstance(obj, InterfaceObject):
        d["elements"] = [e.to_dict() for e in obj.elements]
    return d


def cue_payload(envelope: CueEnvelope, delivery: Delivery, store) -> dict:
    return {
        "cue-id": envelope.cue_id,
        "sender": envelope.sender,
        "execute-at": envelope.schedule.execute_at_ms,
        "delay-budget": envelope.schedule.delay_budget_ms,
        "parts": [_part_descriptor(p, store) for p in delivery.parts],
    }


# -- golden corpus --------------------------------------------------------


def golden_corpus() -> dict[str, WireMessage]:
    """One representative frame per message type, with fixed example data.

    Regenerated by the CLI into ``docs/golden``; tests assert byte identity,
    so every value here is deterministic.
    """
    roster = [
        {"nickname": "Bruno", "role": "Receiver", "capabilities": ["receive-audio"], "test-mode": False},
        {"nickname": "Nick", "role": "Receiver", "capabilities": ["receive-image"], "test-mode": False},
        {"nickname": "Rachel", "role": "Receiver", "capabilities": ["receive-audio"], "test-mode": False},
    ]
    caps = capability_map({Capability.RECEIVE_AUDIO, Capability.RECEIVE_IMAGE})
    return {
        "join": WireMessage("join", 1, {
            "performance": "Free-For-All",
            "nickname": "Nick",
            "role": "Receiver",
            "local-ip": "192.168.1.17",
        }),
        "join_ack": WireMessage("join_ack", 1, {
            "performance": "Free-For-All",
            "nickname": "Nick",
            "role": "Receiver",
            "capabilities": caps,
            "roster": roster,
            "delay-budget": 200,
        }),
        "leave": WireMessage("leave", 9, {}),
        "roster_update": WireMessage("roster_update", 2, {"roster": roster}),
        "cue": WireMessage("cue", 3, {
            "cue-id": "c0ffee00c0ffee00c0ffee00c0ffee00",
            "sender": "Nick",
            "execute-at": 1200,
            "delay-budget": 200,
            "parts": [{
                "content": "img-fsharp4",
                "kind": "image",
                "name": "Fsharp4",
                "verb": "show image",
                "url": "/blob/0c8e9a7e",
            }],
        }),
        "cue_ack": WireMessage("cue_ack", 4, {
            "cue-id": "c0ffee00c0ffee00c0ffee00c0ffee00",
            "late": False,
        }),
        "clock_ping": WireMessage("clock_ping", 5, {"t0": 1000}),
        "clock_pong": WireMessage("clock_pong", 5, {"t0": 1000, "t1": 1040, "t2": 1041}),
        "activity_update": WireMessage("activity_update", 6, {
            "entry": {
                "timestamp": 63900,
                "sender": "Nick",
                "verb": "show image",
                "content-name": "Fsharp4",
                "test": False,
            },
            "display": "Nick: show image: Fsharp4  17:46",
        }),
        "send_request": WireMessage("send_request", 7, {
            "content": "img-fsharp4",
            "designation": {"send-to-all": True},
        }),
        "error": WireMessage("error", 8, {
            "code": "capacity",
            "message": "role 'Receiver' is full (3)",
        }),
        "functionality_change": WireMessage("functionality_change", 10, {
            "flags": ["receive-audio", "receive-image"],
        }),
        "test_toggle": WireMessage("test_toggle", 11, {"on": True}),
    }


def designation_from_payload(d: Mapping[str, Any]):
    from .venue import Designation

    return Designation(
        algorithm_id=d.get("algorithm"),
        assignment_id=d.get("assignment"),
        performers=frozenset(d.get("performers", [])),
        roles=frozenset(d.get("roles", [])),
        send_to_all=bool(d.get("send-to-all", False)),
    )
