from pathlib import Path

import numpy as np
import pytest

from mondegreen.audio import AudioBuffer, write_wav

FIXTURES = Path(__file__).parent / "fixtures"


def sine(freq: float, seconds: float, rate: int = 44100, amplitude: float = 0.5) -> np.ndarray:
    t = np.arange(int(round(seconds * rate))) / rate
    return np.rint(amplitude * 32767.0 * np.sin(2.0 * np.pi * freq * t)).astype(np.int16)


def stereo_wav_bytes(left: np.ndarray, right: np.ndarray, rate: int = 44100) -> bytes:
    return write_wav(AudioBuffer(rate, [left, right]))


def mono_wav_bytes(samples: np.ndarray, rate: int = 44100) -> bytes:
    return write_wav(AudioBuffer(rate, [samples]))


@pytest.fixture
def fixtures_dir():
    return FIXTURES
