"""Content store: ingestion, rendering, locks, and referential integrity."""

import pytest

from telebrain import audio
from telebrain.domain import (
    AlgorithmKind,
    AlgorithmObject,
    Collection,
    CollectionKind,
    ContentKind,
    ContentObject,
    DistributionStep,
    FractionMode,
    FractionalAssignment,
    LayerEntry,
    MultiRoleAssignment,
    TelepromptSpec,
    TimedStep,
)
from telebrain.errors import (
    LockedError,
    NotFoundError,
    ReferentialError,
    RejectedError,
)
from telebrain.store import ContentStore
from telebrain.tts import ToneStubAdapter

from .conftest import PNG_1PX, TONE_100MS, make_venue, tone


def save_tone(store, ms=100, freq=440.0, name="tone"):
    return store.save_upload(audio.encode_wav(tone(ms, freq)), "audio/wav", ContentKind.AUDIO_UPLOAD, name)


def save_image(store, name="pic"):
    return store.save_upload(PNG_1PX, "image/png", ContentKind.IMAGE_UPLOAD, name)


# -- ingestion ------------------------------------------------------------


def test_save_web_audio_copies_and_measures(store, fetcher):
    obj = store.save_web_audio("http://example.test/loop.wav")
    assert obj.kind is ContentKind.AUDIO_WEB
    assert obj.name == "loop.wav"
    assert obj.duration_ms == 100
    assert fetcher.calls == ["http://example.test/loop.wav"]
    assert store.get_pcm(obj.id) == TONE_100MS
    blob = store.get_blob(obj.media)
    assert blob.mime == "audio/wav"
    assert blob.origin["url"] == "http://example.test/loop.wav"


def test_save_web_audio_raw_pcm_mime(store):
    obj = store.save_web_audio("http://example.test/raw.pcm", name="raw")
    assert obj.duration_ms == 100
    assert store.get_pcm(obj.id) == TONE_100MS


def test_save_web_audio_rejects_copyrighted_before_fetch(store, fetcher):
    with pytest.raises(RejectedError) as e:
        store.save_web_audio("http://example.test/song.wav", copyrighted=True)
    assert e.value.code == "copyright"
    assert fetcher.calls == []


def test_save_web_audio_rejects_non_audio(store):
    with pytest.raises(RejectedError) as e:
        store.save_web_audio("http://example.test/page.html")
    assert e.value.code == "non-audio-media"


def test_save_web_image_requires_direct_file_link(store, fetcher):
    with pytest.raises(RejectedError) as e:
        store.save_web_image("http://example.test/gallery")
    assert e.value.code == "bad-image-url"
    assert "not a page" in str(e.value)
    assert fetcher.calls == []  # rejected before any network traffic
    obj = store.save_web_image("http://example.test/photo.png?s=1")
    assert obj.kind is ContentKind.IMAGE_WEB
    assert obj.name == "photo.png"
    assert store.get_blob(obj.media).data == PNG_1PX


def test_save_tts_uses_stub_adapter(store):
    obj = store.save_tts("Please stand up", "en-US")
    assert obj.kind is ContentKind.AUDIO_TTS
    assert obj.name == "Please stand up"
    assert obj.duration_ms == len("Please stand up") * 50
    origin = store.get_blob(obj.media).origin
    assert origin == {"origin": "tts", "language": "en-US", "text": "Please stand up"}


def test_save_tts_length_limit(store):
    with pytest.raises(RejectedError) as e:
        store.save_tts("x" * 101, "en-US")
    assert e.value.code == "text-too-long"


def test_save_upload_audio_and_image(store):
    a = save_tone(store, ms=50, name="clip")
    assert a.duration_ms == 50
    i = save_image(store, name="dot")
    assert i.kind is ContentKind.IMAGE_UPLOAD
    with pytest.raises(RejectedError):
        store.save_upload(b"words", "text/plain", ContentKind.TELEPROMPT, "nope")


def test_save_teleprompt(store):
    obj = store.save_teleprompt("Banner", TelepromptSpec(text="hold"))
    again = store.get(obj.id)
    assert again.media.text == "hold"


# -- blobs ----------------------------------------------------------------


def test_blobs_are_content_addressed(store):
    a = store.put_blob(b"same bytes", "application/octet-stream", {"origin": "upload"})
    b = store.put_blob(b"same bytes", "application/octet-stream", {"origin": "upload"})
    assert a == b
    assert store.get_blob(a).data == b"same bytes"
    with pytest.raises(NotFoundError):
        store.get_blob("0" * 64)
    with pytest.raises(RejectedError):
        store.put_blob(b"", "application/octet-stream", {})


def test_saving_same_url_twice_makes_distinct_objects(store):
    a = store.save_web_audio("http://example.test/loop.wav")
    b = store.save_web_audio("http://example.test/loop.wav")
    assert a.id != b.id
    assert a.media == b.media  # but the bytes are shared


# -- persistence ----------------------------------------------------------


def test_reload_from_disk_round_trips(store, tmp_path, fetcher):
    a = save_tone(store)
    coll = store.save(Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(a.id,), name="Line"))
    reopened = ContentStore(tmp_path / "data", fetcher=fetcher, tts_adapter=ToneStubAdapter())
    assert reopened.get(a.id) == a
    assert reopened.get(coll.id) == coll
    assert reopened.get_pcm(coll.id) == TONE_100MS


# -- collections ----------------------------------------------------------


def test_sentence_renders_offsets_and_blob(store):
    a = save_tone(store, ms=100, freq=440, name="a")
    b = save_tone(store, ms=50, freq=660, name="b")
    coll = store.save(
        Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(a.id, b.id), name="ab")
    )
    assert coll.offsets_ms == (0, 100)
    assert coll.rendered_duration_ms == 150
    assert store.get_pcm(coll.id) == tone(100, 440) + tone(50, 660)
    assert store.audio_duration_ms(coll.id) == 150


def test_layer_renders_mix(store):
    a = save_tone(store, ms=50, freq=440, name="a")
    b = save_tone(store, ms=50, freq=880, name="b")
    coll = store.save(
        Collection(
            id="",
            kind=CollectionKind.AUDIO_LAYER,
            members=(LayerEntry(a.id, 0, 1.0), LayerEntry(b.id, 10, 0.5)),
            name="stack",
        )
    )
    expected = audio.mix_layers([(tone(50, 440), 0, 1.0), (tone(50, 880), 10, 0.5)])
    assert store.get_pcm(coll.id) == expected
    assert coll.rendered_duration_ms == audio.duration_ms(expected)


def test_rendered_sentence_is_audio_like_member(store):
    a = save_tone(store)
    inner = store.save(Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(a.id,), name="in"))
    outer = store.save(
        Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(inner.id, a.id), name="out")
    )
    assert outer.offsets_ms == (0, 100)


def test_pair_requires_one_audio_one_image(store):
    a = save_tone(store)
    b = save_tone(store, name="other")
    i = save_image(store)
    ok = store.save(Collection(id="", kind=CollectionKind.AUDIO_IMAGE_PAIR, members=(a.id, i.id), name="p"))
    assert store.get(ok.id)
    with pytest.raises(ReferentialError, match="one audio and one image"):
        store.save(Collection(id="", kind=CollectionKind.AUDIO_IMAGE_PAIR, members=(a.id, b.id), name="q"))


def test_phrase_members_must_be_images(store):
    a = save_tone(store)
    with pytest.raises(ReferentialError):
        store.save(Collection(id="", kind=CollectionKind.IMAGE_PHRASE, members=(a.id,), name="ph"))


def test_missing_member_reference(store):
    with pytest.raises(ReferentialError, match="missing reference"):
        store.save(Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=("ghost",), name="x"))


def test_folder_listing(store):
    a = save_tone(store, name="a")
    i = save_image(store, name="i")
    folder = store.save(Collection(id="", kind=CollectionKind.FOLDER, members=(a.id, i.id), name="f"))
    assert store.list_ids(folder=folder.id) == sorted([a.id, i.id])
    assert store.list_ids(kind=ContentKind.AUDIO_UPLOAD, folder=folder.id) == [a.id]
    with pytest.raises(RejectedError):
        store.list_ids(folder=a.id)


# -- validation and locks -------------------------------------------------


def test_save_rejects_invalid_with_details(store):
    with pytest.raises(RejectedError) as e:
        store.save(Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(), name="empty"))
    assert e.value.code == "invalid"
    assert e.value.details


def test_lock_blocks_save_and_delete(store):
    a = save_tone(store)
    store.lock(a.id, "pass")
    with pytest.raises(LockedError):
        store.save(store.get(a.id))
    with pytest.raises(LockedError):
        store.delete(a.id)
    with pytest.raises(RejectedError) as e:
        store.lock(a.id, "again")
    assert e.value.code == "already-locked"
    with pytest.raises(RejectedError) as e:
        store.unlock(a.id, "wrong")
    assert e.value.code == "passcode"
    store.unlock(a.id, "pass")
    store.delete(a.id)
    with pytest.raises(NotFoundError):
        store.unlock("nowhere", "p")


def test_unlock_not_locked(store):
    a = save_tone(store)
    with pytest.raises(RejectedError) as e:
        store.unlock(a.id, "p")
    assert e.value.code == "not-locked"


# -- deletion guards ------------------------------------------------------


def test_delete_refused_while_referenced(store):
    a = save_tone(store)
    coll = store.save(Collection(id="", kind=CollectionKind.AUDIO_SENTENCE, members=(a.id,), name="s"))
    with pytest.raises(ReferentialError) as e:
        store.delete(a.id)
    assert e.value.details == [coll.id]
    store.delete(coll.id)
    store.delete(a.id)
    assert not store.exists(a.id)


def test_delete_guard_covers_every_referencing_type(store):
    a = save_tone(store)
    venue = make_venue(store)
    store.save(
        MultiRoleAssignment(id="", venue_id=venue.id, bindings=(("Receiver", a.id),), name="m")
    )
    b = save_tone(store, name="b")
    store.save(
        FractionalAssignment(
            id="", mode=FractionMode.DYNAMIC, fractions=(a.id, b.id), name="f"
        )
    )
    timer = store.save(AlgorithmObject(id="", kind=AlgorithmKind.TIMER, name="t", duration_ms=100))
    store.save(
        AlgorithmObject(
            id="",
            kind=AlgorithmKind.TIMED_ORGANIZATION,
            name="org",
            timed_steps=(TimedStep(timer.id, DistributionStep(a.id, "ALL")),),
        )
    )
    with pytest.raises(ReferentialError) as e:
        store.delete(a.id)
    assert len(e.value.details) == 3
    with pytest.raises(ReferentialError):
        store.delete(timer.id)


# -- assignments and algorithms ------------------------------------------


def test_multirole_checks_venue_roles_and_receivability(store):
    venue = make_venue(store)
    a = save_tone(store)
    ok = store.save(
        MultiRoleAssignment(id="", venue_id=venue.id, bindings=(("Receiver", a.id),), name="m")
    )
    assert ok.binding_map() == {"Receiver": a.id}
    with pytest.raises(ReferentialError, match="no role"):
        store.save(
            MultiRoleAssignment(id="", venue_id=venue.id, bindings=(("Dancer", a.id),), name="m2")
        )
    with pytest.raises(ReferentialError, match="missing venue"):
        store.save(MultiRoleAssignment(id="", venue_id="ghost", bindings=(("Receiver", a.id),), name="m3"))


def test_multirole_rejects_unreceivable_binding(store):
    """A role with no receive flags for the bound object is a modeling error."""
    venue = make_venue(store)
    osc_only = store.save(
        AlgorithmObject(
            id="",
            kind=AlgorithmKind.OSC_BINDING,
            name="o",
            direction="out",
            address_pattern="/x",
        )
    )
    with pytest.raises(ReferentialError, match="cannot receive"):
        store.save(
            MultiRoleAssignment(id="", venue_id=venue.id, bindings=(("Receiver", osc_only.id),), name="m")
        )


def test_timed_organization_trigger_must_be_clock(store):
    a = save_tone(store)
    not_a_timer = store.save(
        AlgorithmObject(
            id="",
            kind=AlgorithmKind.DISTRIBUTION_ORGANIZATION,
            name="d",
            steps=(DistributionStep(a.id, "ALL"),),
        )
    )
    with pytest.raises(ReferentialError, match="not a timer or metronome"):
        store.save(
            AlgorithmObject(
                id="",
                kind=AlgorithmKind.TIMED_ORGANIZATION,
                name="org",
                timed_steps=(TimedStep(not_a_timer.id, DistributionStep(a.id, "ALL")),),
            )
        )


def test_get_pcm_rejects_non_audio(store):
    i = save_image(store)
    with pytest.raises(RejectedError):
        store.get_pcm(i.id)
    with pytest.raises(NotFoundError):
        store.get(
            "nope"
        )
