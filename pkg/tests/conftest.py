"""Shared fixtures: canned media, stub fetcher, stores, and virtual clocks.

Also owns the acceptance summary hook: every test in test_acceptance.py gets
one [PASS]/[FAIL] line at the end of the run.
"""

import struct
import zlib

import pytest

from telebrain import audio
from telebrain.domain import (
    ALL_CAPABILITIES,
    Capability,
    Role,
    RoleSlot,
    Venue,
)
from telebrain.store import ContentStore
from telebrain.timing import VirtualClock
from telebrain.tts import ToneStubAdapter
from telebrain.venue import VenueRuntime


def tone(ms: int, freq: float = 440.0) -> bytes:
    """Internal-format PCM test tone; ms must be a multiple of 10."""
    return audio.sine_tone(freq, audio.ms_to_samples(ms))


def _png_chunk(tag: bytes, payload: bytes) -> bytes:
    return (
        struct.pack(">I", len(payload))
        + tag
        + payload
        + struct.pack(">I", zlib.crc32(tag + payload))
    )


# Smallest well-formed PNG: 1x1 grayscale pixel.
PNG_1PX = (
    b"\x89PNG\r\n\x1a\n"
    + _png_chunk(b"IHDR", struct.pack(">IIBBBBB", 1, 1, 8, 0, 0, 0, 0))
    + _png_chunk(b"IDAT", zlib.compress(b"\x00\x00"))
    + _png_chunk(b"IEND", b"")
)

TONE_100MS = tone(100)
WAV_100MS = audio.encode_wav(TONE_100MS)


class StubFetcher:
    """URL-suffix keyed fetcher; records calls so tests can assert ordering."""

    def __init__(self):
        self.calls = []

    def __call__(self, url: str) -> tuple[bytes, str]:
        self.calls.append(url)
        path = url.split("?", 1)[0]
        if path.endswith(".wav"):
            return WAV_100MS, "audio/wav"
        if path.endswith(".pcm"):
            return TONE_100MS, "audio/pcm"
        if path.endswith(".png"):
            return PNG_1PX, "image/png"
        if path.endswith(".jpg"):
            return b"\xff\xd8\xff\xe0 not a real jpeg", "image/jpeg"
        return b"<html><body>a page</body></html>", "text/html"


@pytest.fixture
def fetcher():
    return StubFetcher()


@pytest.fixture
def store(tmp_path, fetcher):
    return ContentStore(tmp_path / "data", fetcher=fetcher, tts_adapter=ToneStubAdapter())


@pytest.fixture
def clock():
    return VirtualClock(0)


RECEIVER_CAPS = frozenset(
    {
        Capability.RECEIVE_AUDIO,
        Capability.RECEIVE_IMAGE,
        Capability.RECEIVE_TEXT,
        Capability.PERFORMER_ACTIVITY_LOG,
    }
)


def make_venue(store, *, passcode=None, join_requirements=frozenset({"nickname"})):
    """A venue with one do-everything Prompter slot and open Receiver slots."""
    venue = Venue(
        id="",
        name="Test Hall",
        roles=(
            RoleSlot(Role("Prompter", ALL_CAPABILITIES)),
            RoleSlot(Role("Receiver", RECEIVER_CAPS)),
        ),
        passcode=passcode,
        join_requirements=join_requirements,
    )
    return store.save(venue)


@pytest.fixture
def venue(store):
    return make_venue(store)


@pytest.fixture
def runtime(store, clock):
    return VenueRuntime(store, clock=clock, seed=7, tz="UTC")


# -- acceptance summary ---------------------------------------------------

_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::", 1)[-1]
    if report.when == "call":
        _acceptance[name] = report.outcome
    elif report.outcome != "passed" and name not in _acceptance:
        _acceptance[name] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance.items():
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{tag}] {name}")
