"""PCM audio pipeline: decoding, sentence concatenation, and layer mixing.

Everything in the pipeline operates on one internal format: 16-bit signed
little-endian mono PCM at 44100 Hz. Ingestion converts incoming media to
that format and pads it with trailing silence to a 10 ms boundary (441
samples), which is the smallest quantum whose duration is a whole number of
milliseconds at 44.1 kHz. Because of that padding, millisecond offset tables
convert to exact sample positions and sentence slicing is byte-exact.

Rendered output is RIFF WAV so blobs stay inspectable with ordinary tools.
"""

from __future__ import annotations

import io
import math
import wave
from array import array
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .errors import RejectedError

SAMPLE_RATE = 44100
SAMPLE_WIDTH = 2  # int16
MS_QUANTUM_SAMPLES = 441  # 10 ms at 44.1 kHz
INT16_MIN = -32768
INT16_MAX = 32767


def round_half_away(x: float) -> int:
    """Round to nearest integer, ties away from zero (pinned for bit-exact tests)."""
    return int(math.floor(x + 0.5)) if x >= 0 else int(math.ceil(x - 0.5))


def ms_to_samples(ms: int) -> int:
    # ms * 44.1 as exact integer math, half-away on the rare inexact case
    n = ms * SAMPLE_RATE
    q, r = divmod(n, 1000)
    return q + (1 if r >= 500 else 0)


def sample_count(pcm: bytes) -> int:
    if len(pcm) % SAMPLE_WIDTH:
        raise RejectedError("PCM byte length must be a multiple of 2")
    return len(pcm) // SAMPLE_WIDTH


def duration_ms(pcm: bytes) -> int:
    """Exact duration of ingested PCM. Requires whole-millisecond padding."""
    n = sample_count(pcm)
    if n % MS_QUANTUM_SAMPLES:
        raise RejectedError("PCM not aligned to a whole-millisecond boundary")
    return n * 10 // MS_QUANTUM_SAMPLES


def pad_to_whole_ms(pcm: bytes) -> bytes:
    """Append silence up to the next 10 ms boundary so duration is exact ms."""
    n = sample_count(pcm)
    rem = n % MS_QUANTUM_SAMPLES
    if rem == 0:
        return pcm
    return pcm + b"\x00" * ((MS_QUANTUM_SAMPLES - rem) * SAMPLE_WIDTH)


def _to_int16_array(pcm: bytes) -> array:
    a = array("h")
    a.frombytes(pcm)
    return a


def encode_wav(pcm: bytes) -> bytes:
    buf = io.BytesIO()
    with wave.open(buf, "wb") as w:
        w.setnchannels(1)
        w.setsampwidth(SAMPLE_WIDTH)
        w.setframerate(SAMPLE_RATE)
        w.writeframes(pcm)
    return buf.getvalue()


def decode_wav(data: bytes) -> bytes:
    """Decode a RIFF WAV to the internal format (mono, 16-bit, 44100 Hz).

    Stereo is downmixed by averaging, 8-bit unsigned is widened, and other
    sample rates go through the linear resampler. Unsupported widths are
    rejected rather than guessed at.
    """
    try:
        with wave.open(io.BytesIO(data), "rb") as w:
            channels = w.getnchannels()
            width = w.getsampwidth()
            rate = w.getframerate()
            frames = w.readframes(w.getnframes())
    except (wave.Error, EOFError) as exc:
        raise RejectedError(f"not a decodable WAV file: {exc}") from exc

    if width == 1:
        samples = array("h", ((b - 128) << 8 for b in frames))
    elif width == 2:
        samples = _to_int16_array(frames)
    else:
        raise RejectedError(f"unsupported sample width: {width * 8} bit")

    if channels > 1:
        mixed = array("h", bytes(2 * (len(samples) // channels)))
        for i in range(len(mixed)):
            frame = samples[i * channels : (i + 1) * channels]
            mixed[i] = round_half_away(sum(frame) / channels)
        samples = mixed
    if not samples:
        raise RejectedError("empty audio")
    if rate != SAMPLE_RATE:
        samples = resample_linear(samples, rate, SAMPLE_RATE)
    return samples.tobytes()


def resample_linear(samples: Sequence[int], src_rate: int, dst_rate: int) -> array:
    """Endpoint-preserving linear resampler; good enough for ingestion."""
    if src_rate <= 0 or dst_rate <= 0:
        raise RejectedError("sample rates must be positive")
    n_in = len(samples)
    if n_in == 0:
        return array("h")
    n_out = max(1, (n_in * dst_rate + src_rate // 2) // src_rate)
    out = array("h", bytes(2 * n_out))
    if n_out == 1 or n_in == 1:
        for i in range(n_out):
            out[i] = samples[0]
        return out
    step = (n_in - 1) / (n_out - 1)
    for i in range(n_out):
        pos = i * step
        lo = int(pos)
        hi = min(lo + 1, n_in - 1)
        frac = pos - lo
        out[i] = round_half_away(samples[lo] * (1.0 - frac) + samples[hi] * frac)
    return out


def scale(pcm: bytes, volume: float) -> bytes:
    """Scale every sample by a linear amplitude factor in [0, 1]."""
    if not 0.0 <= volume <= 1.0:
        raise RejectedError("volume in [0,1]")
    if volume == 1.0:
        return pcm
    samples = _to_int16_array(pcm)
    out = array("h", (round_half_away(s * volume) for s in samples))
    return out.tobytes()


@dataclass(frozen=True)
class SentenceRender:
    """A concatenated sentence: the blob plus the table that lets clients
    re-slice and reorder members without a round trip to the server."""

    member_ids: tuple[str, ...]
    offsets_ms: tuple[int, ...]
    total_duration_ms: int
    pcm: bytes
    blob_id: Optional[str] = None


def concatenate_sentence(members: Sequence[tuple[str, bytes]]) -> SentenceRender:
    """Concatenate member PCM back to back; offsets are prefix sums of durations.

    Members must already be in the internal format with whole-millisecond
    padding, which every store ingestion path guarantees.
    """
    if not members:
        raise RejectedError("sentence needs at least one member")
    offsets: list[int] = []
    total = 0
    parts: list[bytes] = []
    for member_id, pcm in members:
        dur = duration_ms(pcm)
        if dur <= 0:
            raise RejectedError(f"zero-duration member: {member_id}")
        offsets.append(total)
        total += dur
        parts.append(pcm)
    return SentenceRender(
        member_ids=tuple(m for m, _ in members),
        offsets_ms=tuple(offsets),
        total_duration_ms=total,
        pcm=b"".join(parts),
    )


def slice_member(pcm: bytes, offset_ms: int, dur_ms: int) -> bytes:
    """Cut [offset, offset+duration) out of a rendered sentence blob."""
    start = ms_to_samples(offset_ms) * SAMPLE_WIDTH
    end = start + ms_to_samples(dur_ms) * SAMPLE_WIDTH
    return pcm[start:end]


def mix_layers(entries: Sequence[tuple[bytes, int, float]]) -> bytes:
    """Mix (pcm, start_ms, volume) entries into one buffer.

    Each entry is volume-scaled per sample (half-away rounding), placed at its
    start offset, integer-summed, then saturated to the int16 range. Scaling
    before summation keeps the result independent of entry order.
    """
    if not entries:
        raise RejectedError("layer needs at least one entry")
    placed: list[tuple[int, array]] = []
    end = 0
    for pcm, start_ms, volume in entries:
        if start_ms < 0:
            raise RejectedError("start time >= 0")
        scaled = _to_int16_array(scale(pcm, volume))
        start = ms_to_samples(start_ms)
        placed.append((start, scaled))
        end = max(end, start + len(scaled))
    acc = [0] * end
    for start, scaled in placed:
        for i, s in enumerate(scaled):
            acc[start + i] += s
    out = array("h", (min(INT16_MAX, max(INT16_MIN, v)) for v in acc))
    return pad_to_whole_ms(out.tobytes())


def sine_tone(freq_hz: float, n_samples: int, amplitude: float = 0.4) -> bytes:
    """Deterministic sine burst used by the offline TTS stub and tests."""
    peak = amplitude * INT16_MAX
    out = array(
        "h",
        (
            round_half_away(peak * math.sin(2.0 * math.pi * freq_hz * t / SAMPLE_RATE))
            for t in range(n_samples)
        ),
    )
    return out.tobytes()
