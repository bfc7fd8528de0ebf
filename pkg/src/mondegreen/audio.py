"""16-bit PCM WAV I/O and saturating integer channel arithmetic.

Only the classic RIFF/WAVE shape is supported: format code 1 (PCM), 16 bits
per sample, one or two channels. All channel math happens in int32 and
saturates back into int16 — no float detours, so results are bit-exact and
platform independent.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import WavFormatError

I16_MIN = -32768
I16_MAX = 32767


def saturate16(x: np.ndarray) -> np.ndarray:
    """Clamp an integer array into int16 range."""
    return np.clip(x, I16_MIN, I16_MAX).astype(np.int16)


def _as_int16(samples, what: str) -> np.ndarray:
    arr = np.asarray(samples)
    if arr.ndim != 1:
        raise WavFormatError(f"{what} must be one-dimensional")
    if arr.dtype == np.int16:
        return arr
    if not np.issubdtype(arr.dtype, np.integer):
        raise WavFormatError(f"{what} must hold integer samples, not {arr.dtype}")
    if len(arr) and (arr.min() < I16_MIN or arr.max() > I16_MAX):
        raise WavFormatError(f"{what} has samples outside int16 range")
    return arr.astype(np.int16)


@dataclass
class MonoSignal:
    sample_rate: int
    samples: np.ndarray  # int16

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise WavFormatError(f"sample rate must be positive, got {self.sample_rate}")
        self.samples = _as_int16(self.samples, "samples")

    def __len__(self) -> int:
        return len(self.samples)


@dataclass
class AudioBuffer:
    sample_rate: int
    channels: list[np.ndarray]  # one int16 array per channel, equal lengths

    def __post_init__(self) -> None:
        if self.sample_rate <= 0:
            raise WavFormatError(f"sample rate must be positive, got {self.sample_rate}")
        if len(self.channels) not in (1, 2):
            raise WavFormatError(f"only mono or stereo supported, got {len(self.channels)} channels")
        self.channels = [_as_int16(c, f"channel {k}") for k, c in enumerate(self.channels)]
        lengths = {len(c) for c in self.channels}
        if len(lengths) > 1:
            raise WavFormatError(f"channel lengths differ: {sorted(lengths)}")

    @property
    def n_channels(self) -> int:
        return len(self.channels)

    @property
    def n_frames(self) -> int:
        return len(self.channels[0])


def read_wav(data: bytes) -> AudioBuffer:
    """Decode a RIFF/WAVE byte string.

    Unknown chunks are skipped; non-PCM data, bit depths other than 16,
    more than two channels, and short/truncated chunks are errors.
    """
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError("not a RIFF/WAVE file")
    fmt: tuple[int, int] | None = None
    pcm: bytes | None = None
    pos = 12
    while pos + 8 <= len(data):
        chunk_id = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        body = pos + 8
        if chunk_id == b"fmt ":
            if size < 16 or body + 16 > len(data):
                raise WavFormatError("fmt chunk too short")
            code, n_ch, rate, _byte_rate, _block, bits = struct.unpack_from(
                "<HHIIHH", data, body
            )
            if code != 1:
                raise WavFormatError(f"unsupported format code {code}; only PCM (1) is handled")
            if bits != 16:
                raise WavFormatError(f"unsupported bit depth {bits}; only 16-bit PCM is handled")
            if n_ch not in (1, 2):
                raise WavFormatError(f"unsupported channel count {n_ch}; mono or stereo only")
            if rate == 0:
                raise WavFormatError("sample rate is zero")
            fmt = (n_ch, rate)
        elif chunk_id == b"data":
            if body + size > len(data):
                raise WavFormatError(
                    f"data chunk declares {size} bytes but only "
                    f"{len(data) - body} remain; file is truncated"
                )
            pcm = data[body : body + size]
        pos = body + size + (size & 1)  # chunks are word aligned
    if fmt is None:
        raise WavFormatError("missing fmt chunk")
    if pcm is None:
        raise WavFormatError("missing data chunk")
    n_ch, rate = fmt
    frame_bytes = 2 * n_ch
    if len(pcm) % frame_bytes:
        raise WavFormatError(
            f"data chunk length {len(pcm)} is not a whole number of "
            f"{frame_bytes}-byte frames"
        )
    interleaved = np.frombuffer(pcm, dtype="<i2")
    channels = [interleaved[k::n_ch].astype(np.int16) for k in range(n_ch)]
    return AudioBuffer(sample_rate=rate, channels=channels)


def write_wav(buf: AudioBuffer) -> bytes:
    """Encode as canonical RIFF/WAVE: 44-byte header, then interleaved PCM."""
    n_ch = buf.n_channels
    interleaved = np.empty(buf.n_frames * n_ch, dtype="<i2")
    for k, ch in enumerate(buf.channels):
        interleaved[k::n_ch] = ch
    payload = interleaved.tobytes()
    block = 2 * n_ch
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        1,
        n_ch,
        buf.sample_rate,
        buf.sample_rate * block,
        block,
        16,
        b"data",
        len(payload),
    )
    return header + payload


def split_channels(buf: AudioBuffer) -> tuple[MonoSignal, MonoSignal]:
    if buf.n_channels != 2:
        raise WavFormatError("channel split needs a stereo buffer")
    return (
        MonoSignal(buf.sample_rate, buf.channels[0].copy()),
        MonoSignal(buf.sample_rate, buf.channels[1].copy()),
    )


def merge_channels(left: MonoSignal, right: MonoSignal) -> AudioBuffer:
    if left.sample_rate != right.sample_rate:
        raise WavFormatError(
            f"sample rates differ: {left.sample_rate} vs {right.sample_rate}"
        )
    if len(left) != len(right):
        raise WavFormatError(f"channel lengths differ: {len(left)} vs {len(right)}")
    return AudioBuffer(left.sample_rate, [left.samples.copy(), right.samples.copy()])


def invert_phase(sig: MonoSignal) -> MonoSignal:
    """Negate every sample, saturating (so -32768 becomes 32767)."""
    return MonoSignal(sig.sample_rate, saturate16(-sig.samples.astype(np.int32)))


def overlay(a: MonoSignal, b: MonoSignal) -> MonoSignal:
    """Sample-wise saturating sum; the shorter signal is zero-padded."""
    if a.sample_rate != b.sample_rate:
        raise WavFormatError(
            f"cannot overlay signals at different rates: {a.sample_rate} vs {b.sample_rate}"
        )
    acc = np.zeros(max(len(a), len(b)), dtype=np.int32)
    acc[: len(a)] += a.samples
    acc[: len(b)] += b.samples
    return MonoSignal(a.sample_rate, saturate16(acc))


def downmix(buf: AudioBuffer) -> MonoSignal:
    """Stereo to mono: (L + R) / 2 per sample, rounding toward zero."""
    if buf.n_channels != 2:
        raise WavFormatError("downmix needs a stereo buffer")
    total = buf.channels[0].astype(np.int32) + buf.channels[1].astype(np.int32)
    halved = np.sign(total) * (np.abs(total) // 2)  # truncate toward zero
    return MonoSignal(buf.sample_rate, halved.astype(np.int16))
