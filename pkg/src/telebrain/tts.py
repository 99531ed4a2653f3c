"""Text-to-speech adapters.

The pipeline only ever sees the adapter interface; which synthesizer sits
behind it is deployment configuration. The default is the offline tone stub
so every render is deterministic and the test suite never touches a network.
"""

from __future__ import annotations

import json
import urllib.request
from typing import Protocol

from . import audio
from .errors import RejectedError, TelebrainError

MAX_TTS_CHARS = 100

# Tone stub layout: one fixed-frequency burst per character.
STUB_TONE_MS = 50
STUB_TONE_SAMPLES = audio.ms_to_samples(STUB_TONE_MS)
STUB_BASE_HZ = 200.0
STUB_STEP_HZ = 25.0
STUB_AMPLITUDE = 0.4


class TtsAdapter(Protocol):
    deterministic: bool

    def render(self, text: str, language: str) -> bytes:
        """Return mono 16-bit 44100 Hz PCM for *text*."""
        ...


def char_tone_hz(ch: str) -> float:
    return STUB_BASE_HZ + (ord(ch) % 64) * STUB_STEP_HZ


class ToneStubAdapter:
    """Offline stand-in: each character becomes a 50 ms fixed-frequency tone.

    Identical input always yields identical bytes, which is what lets tests
    freeze expected renders.
    """

    deterministic = True

    def render(self, text: str, language: str) -> bytes:
        if not text:
            raise RejectedError("empty text")
        parts = [
            audio.sine_tone(char_tone_hz(ch), STUB_TONE_SAMPLES, STUB_AMPLITUDE) for ch in text
        ]
        return b"".join(parts)


class HttpTtsAdapter:
    """Client for an external synthesis service; used only when configured.

    The live-send path must fail fast, so the timeout is part of the contract
    rather than an afterthought.
    """

    deterministic = False

    def __init__(self, endpoint: str, timeout_ms: int = 5000, language_map: dict | None = None):
        self.endpoint = endpoint
        self.timeout_ms = timeout_ms
        self.language_map = language_map or {}

    def render(self, text: str, language: str) -> bytes:
        body = json.dumps(
            {"text": text, "language": self.language_map.get(language, language)}
        ).encode("utf-8")
        req = urllib.request.Request(
            self.endpoint, data=body, headers={"Content-Type": "application/json"}
        )
        try:
            with urllib.request.urlopen(req, timeout=self.timeout_ms / 1000.0) as resp:
                data = resp.read()
        except Exception as exc:
            raise TelebrainError(f"TTS adapter failure: {exc}", code="tts-adapter") from exc
        return audio.decode_wav(data)


def render_tts(text: str, language: str, adapter: TtsAdapter) -> bytes:
    """Render *text* through *adapter* and normalize to the internal format.

    Length limits are enforced here, before the adapter is ever called.
    """
    if not text:
        raise RejectedError("empty text", code="text-empty")
    if len(text) > MAX_TTS_CHARS:
        raise RejectedError(
            f"text too long: {len(text)} > {MAX_TTS_CHARS} characters", code="text-too-long"
        )
    pcm = adapter.render(text, language)
    return audio.pad_to_whole_ms(pcm)
