"""Short-time spectra: spectrogram grids and whole-signal frequency curves.

Magnitudes are reported in dBFS: samples are scaled to [-1, 1) and each
windowed frame is normalized by half the window sum, so a full-scale sine
sitting on a bin center reads ~0 dB. Everything below -120 dB is clamped to
-120 (the floor also stands in for log(0) on silence).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import MonoSignal
from .errors import SpectrumError

DB_FLOOR = -120.0


def _window(nfft: int, kind: str) -> np.ndarray:
    if kind == "hann":
        return np.hanning(nfft)
    if kind == "rect":
        return np.ones(nfft)
    raise ValueError(f"unknown window {kind!r}; pick 'hann' or 'rect'")


def _check_params(nfft: int, hop: int) -> None:
    if nfft < 16 or nfft & (nfft - 1):
        raise ValueError(f"nfft must be a power of two >= 16, got {nfft}")
    if not 0 < hop <= nfft:
        raise ValueError(f"hop must be in 1..nfft, got {hop}")


def frame_count(n_samples: int, nfft: int, hop: int) -> int:
    if n_samples < nfft:
        return 0
    return 1 + (n_samples - nfft) // hop


def stft(
    sig: MonoSignal, nfft: int = 256, hop: int = 128, window: str = "hann"
) -> np.ndarray:
    """Windowed one-sided DFT frames: (frames, nfft // 2 + 1) complex array.

    Frames start every ``hop`` samples; the tail that doesn't fill a whole
    frame is dropped. A signal shorter than one frame is an error.
    """
    _check_params(nfft, hop)
    x = sig.samples.astype(np.float64) / 32768.0
    count = frame_count(len(x), nfft, hop)
    if count == 0:
        raise SpectrumError(
            f"signal has {len(x)} samples; need at least nfft={nfft} for one frame"
        )
    w = _window(nfft, window)
    idx = hop * np.arange(count)[:, None] + np.arange(nfft)[None, :]
    return np.fft.rfft(x[idx] * w, axis=1)


@dataclass
class SpectrogramGrid:
    sample_rate: int
    hop: int
    values: np.ndarray  # (frames, bins) dB, clamped at floor_db
    floor_db: float = DB_FLOOR

    @property
    def frame_count(self) -> int:
        return self.values.shape[0]

    @property
    def bin_count(self) -> int:
        return self.values.shape[1]

    @property
    def bin_frequencies(self) -> np.ndarray:
        nfft = (self.bin_count - 1) * 2
        return np.arange(self.bin_count) * (self.sample_rate / nfft)


def spectrogram(
    sig: MonoSignal, nfft: int = 256, hop: int = 128, window: str = "hann"
) -> SpectrogramGrid:
    """Time/frequency magnitude grid in dBFS."""
    frames = stft(sig, nfft, hop, window)
    scale = _window(nfft, window).sum() / 2.0
    power = np.abs(frames / scale) ** 2
    with np.errstate(divide="ignore"):
        db = 10.0 * np.log10(power)
    return SpectrogramGrid(sig.sample_rate, hop, np.maximum(db, DB_FLOOR))


@dataclass
class SpectrumCurve:
    frequencies: np.ndarray
    magnitudes_db: np.ndarray
    scale: str  # "linear" | "log"


def frequency_analysis(
    sig: MonoSignal,
    scale: str = "linear",
    nfft: int = 256,
    hop: int = 128,
    window: str = "hann",
) -> SpectrumCurve:
    """Average spectrum over all frames (Welch-style, in dBFS).

    ``linear`` returns one point per DFT bin. ``log`` resamples onto a
    logarithmic axis with 48 points per octave starting at 20 Hz, capped at
    the Nyquist frequency. Signals shorter than one frame are zero-padded
    up to nfft rather than rejected.
    """
    _check_params(nfft, hop)
    if len(sig.samples) == 0:
        raise SpectrumError("empty signal")
    if len(sig.samples) < nfft:
        padded = np.zeros(nfft, dtype=np.int16)
        padded[: len(sig.samples)] = sig.samples
        sig = MonoSignal(sig.sample_rate, padded)
    frames = stft(sig, nfft, hop, window)
    norm = _window(nfft, window).sum() / 2.0
    power = (np.abs(frames / norm) ** 2).mean(axis=0)
    with np.errstate(divide="ignore"):
        db = np.maximum(10.0 * np.log10(power), DB_FLOOR)
    freqs = np.arange(nfft // 2 + 1) * (sig.sample_rate / nfft)
    if scale == "linear":
        return SpectrumCurve(freqs, db, "linear")
    if scale != "log":
        raise ValueError(f"unknown scale {scale!r}; pick 'linear' or 'log'")
    nyquist = sig.sample_rate / 2.0
    if nyquist <= 20.0:
        raise SpectrumError("sample rate too low for a 20 Hz based log axis")
    n_points = int(np.floor(48.0 * np.log2(nyquist / 20.0))) + 1
    log_f = 20.0 * 2.0 ** (np.arange(n_points) / 48.0)
    log_db = np.interp(log_f, freqs, db)
    return SpectrumCurve(log_f, log_db, "log")


def export_grid(grid: SpectrogramGrid | SpectrumCurve, fmt: str = "csv") -> bytes:
    """Serialize a grid or curve.

    ``csv``: header row of bin frequencies, then one row per frame (a curve
    exports as a single row), all values to three decimals. ``pgm``: binary
    P5 image, one byte per cell, [floor_db, 0 dB] mapped to [0, 255].
    """
    if isinstance(grid, SpectrumCurve):
        values = grid.magnitudes_db[None, :]
        freqs = grid.frequencies
        floor = DB_FLOOR
    else:
        values = grid.values
        freqs = grid.bin_frequencies
        floor = grid.floor_db
    if fmt == "csv":
        lines = [",".join(f"{f:.3f}" for f in freqs)]
        for row in values:
            lines.append(",".join(f"{v:.3f}" for v in row))
        return ("\n".join(lines) + "\n").encode("ascii")
    if fmt == "pgm":
        h, w = values.shape
        pixels = np.clip(np.rint((values - floor) / (0.0 - floor) * 255.0), 0, 255)
        return b"P5\n%d %d\n255\n" % (w, h) + pixels.astype(np.uint8).tobytes()
    raise ValueError(f"unknown export format {fmt!r}; pick 'csv' or 'pgm'")
