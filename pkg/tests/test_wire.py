"""Wire protocol: framing, canonical form, sequence tracking, cue payloads."""

import json
import random

import pytest

from telebrain import audio, wire
from telebrain.domain import Capability, Collection, CollectionKind, ContentKind
from telebrain.errors import ProtocolError, RejectedError, TelebrainError
from telebrain.timing import Schedule
from telebrain.venue import CueEnvelope, CuePart, Delivery

from .conftest import PNG_1PX, tone


def test_serialize_is_canonical():
    msg = wire.WireMessage("leave", 3, {"b": 1, "a": 2})
    frame = wire.serialize(msg)
    assert frame == '{"payload":{"a":2,"b":1},"seq":3,"type":"leave"}'
    assert " " not in frame


def test_round_trip_preserves_unknown_fields():
    frame = '{"payload":{},"seq":1,"trace-id":"abc","type":"leave"}'
    msg = wire.deserialize(frame)
    assert msg.extra == {"trace-id": "abc"}
    assert wire.serialize(msg) == frame


def test_unknown_type_and_bad_seq_rejected():
    with pytest.raises(ProtocolError) as e:
        wire.WireMessage("dance", 1, {})
    assert e.value.code == "unknown-type"
    with pytest.raises(ProtocolError):
        wire.WireMessage("leave", 0, {})
    with pytest.raises(ProtocolError):
        wire.WireMessage("leave", "one", {})


@pytest.mark.parametrize(
    "frame",
    [
        "not json at all",
        "[1,2,3]",
        '{"seq":1,"payload":{}}',
        '{"type":"leave","payload":{}}',
        '{"type":"leave","seq":1,"payload":[]}',
    ],
)
def test_malformed_frames(frame):
    with pytest.raises(ProtocolError) as e:
        wire.deserialize(frame)
    assert e.value.code == "malformed"


def test_golden_corpus_round_trip_bytes():
    corpus = wire.golden_corpus()
    assert set(corpus) == wire.MESSAGE_TYPES
    for mtype, msg in corpus.items():
        frame = wire.serialize(msg)
        again = wire.deserialize(frame)
        assert again == msg
        assert wire.serialize(again) == frame
        assert json.loads(frame)["type"] == mtype


def test_seq_tracker_gaps_and_regressions():
    t = wire.SeqTracker()
    assert t.observe(1) is None
    assert t.observe(2) is None
    gap = t.observe(5)
    assert gap == wire.SeqGap(expected=3, got=5)
    assert t.gaps == [gap]
    with pytest.raises(ProtocolError) as e:
        t.observe(5)
    assert e.value.code == "seq-regression"
    with pytest.raises(ProtocolError):
        t.observe(2)


def test_seq_tracker_first_message_gap():
    t = wire.SeqTracker()
    assert t.observe(4) == wire.SeqGap(expected=1, got=4)


def test_seq_source_monotonic():
    s = wire.SeqSource()
    assert [s.next() for _ in range(4)] == [1, 2, 3, 4]


def test_seq_gap_property_on_fuzzed_streams():
    """Dropping messages always surfaces gaps whose union names every drop."""
    rng = random.Random(5)
    for _ in range(200):
        n = rng.randint(2, 40)
        kept = sorted(rng.sample(range(1, n + 1), rng.randint(1, n)))
        t = wire.SeqTracker()
        for seq in kept:
            t.observe(seq)
        missing = set(range(1, max(kept) + 1)) - set(kept)
        reported = set()
        for gap in t.gaps:
            reported.update(range(gap.expected, gap.got))
        assert reported == missing


def test_capability_map_is_total():
    m = wire.capability_map({Capability.RECEIVE_AUDIO})
    assert set(m) == {c.value for c in Capability}
    assert m["receive-audio"] is True
    assert sum(m.values()) == 1
    assert wire.capability_map({"send-osc"})["send-osc"] is True


def test_error_message_carries_code_and_details():
    exc = TelebrainError("nope", code="sample", details=["a", "b"])
    msg = wire.error_message(exc, seq=9)
    assert msg.type == "error"
    assert msg.payload == {"code": "sample", "message": "nope", "details": ["a", "b"]}


# -- cue payloads ---------------------------------------------------------


def save_tone(store, ms=100, freq=440.0, name="tone"):
    return store.save_upload(audio.encode_wav(tone(ms, freq)), "audio/wav", ContentKind.AUDIO_UPLOAD, name)


def make_envelope(parts):
    delivery = Delivery("conn1", "Ana", tuple(parts))
    envelope = CueEnvelope("cue1", "Nick", (delivery,), Schedule(1200, 200))
    return envelope, delivery


def test_cue_payload_audio_part(store):
    a = save_tone(store, name="Tone A")
    part = CuePart(a.id, "audio", Capability.RECEIVE_AUDIO, "play audio", a.name)
    envelope, delivery = make_envelope([part])
    payload = wire.cue_payload(envelope, delivery, store)
    assert payload["cue-id"] == "cue1"
    assert payload["execute-at"] == 1200
    assert payload["delay-budget"] == 200
    (d,) = payload["parts"]
    assert d["url"] == f"/blob/{a.media}"
    assert d["duration"] == 100
    assert d["verb"] == "play audio"


def test_cue_payload_sentence_includes_offset_table(store):
    a = save_tone(store, ms=100, name="a")
    b = save_tone(store, ms=50, freq=550, name="b")
    coll = store.save(
        Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(a.id, b.id), name="ab")
    )
    part = CuePart(coll.id, "audio", Capability.RECEIVE_AUDIO, "play audio", coll.name)
    envelope, delivery = make_envelope([part])
    (d,) = wire.cue_payload(envelope, delivery, store)["parts"]
    assert d["offsets"] == [0, 100]
    assert d["members"] == [a.id, b.id]
    assert d["duration"] == 150
    assert d["url"] == f"/blob/{coll.rendered_media}"


def test_cue_payload_image_phrase_lists_images(store):
    imgs = [
        store.save_upload(PNG_1PX, "image/png", ContentKind.IMAGE_UPLOAD, f"pic{i}") for i in range(2)
    ]
    coll = store.save(
        Collection(id="", kind=CollectionKind.IMAGE_PHRASE, members=tuple(i.id for i in imgs), name="ph")
    )
    part = CuePart(coll.id, "image-phrase", Capability.RECEIVE_IMAGE, "show images", coll.name)
    envelope, delivery = make_envelope([part])
    (d,) = wire.cue_payload(envelope, delivery, store)["parts"]
    assert [i["name"] for i in d["images"]] == ["pic0", "pic1"]
    assert all(i["url"].startswith("/blob/") for i in d["images"])


def test_cue_payload_inline_text_needs_no_store_lookup():
    part = CuePart(None, "text", Capability.RECEIVE_TEXT, "show text", "hello", inline={"text": "hello"})
    envelope, delivery = make_envelope([part])
    (d,) = wire.cue_payload(envelope, delivery, None)["parts"]
    assert d["text"] == "hello"
    assert d["content"] is None


def test_designation_from_payload_defaults():
    d = wire.designation_from_payload({})
    assert not d.algorithm_id and not d.assignment_id
    assert d.performers == frozenset() and d.roles == frozenset()
    assert d.send_to_all is False
    d = wire.designation_from_payload({"performers": ["Ana"], "send-to-all": True})
    assert d.performers == {"Ana"}
    assert d.send_to_all


def test_activity_golden_line_matches_display_format():
    corpus = wire.golden_corpus()
    display = corpus["activity_update"].payload["display"]
    assert display == "Nick: show image: Fsharp4  17:46"
