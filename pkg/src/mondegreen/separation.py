"""Stereo source separation: mid/side center cancellation and 2-source FastICA.

Both methods take a stereo buffer and hand back two mono estimates. Center
cancellation is the karaoke trick: the side signal L - R nulls anything
panned dead center (typically the vocal), leaving an instrumental estimate,
while the mid signal (L + R) / 2 serves as the center/vocal estimate.

FastICA instead treats L and R as linear mixtures of two independent
sources and estimates an unmixing matrix on whitened data with a symmetric
fixed-point iteration. Component order and sign are arbitrary — callers who
care must match components to references themselves. Non-convergence is a
property of the data, not a failure: the last iterate is still returned,
flagged in the diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .audio import AudioBuffer, MonoSignal, downmix, saturate16, split_channels
from .errors import DegenerateInputError

PEAK_TARGET = 0.891 * 32767  # just under -1 dBFS

CONTRASTS = {
    "logcosh": (lambda u: np.tanh(u), lambda u: 1.0 - np.tanh(u) ** 2),
    "cube": (lambda u: u**3, lambda u: 3.0 * u**2),
}


@dataclass
class MixingEstimate:
    unmixing: np.ndarray  # 2x2, rows orthonormal in whitened coordinates
    whitening: np.ndarray  # 2x2
    means: np.ndarray  # per-channel means removed before whitening


@dataclass
class Diagnostics:
    iterations: int
    converged: bool
    component_correlation: float
    note: str = ""


@dataclass
class SeparationResult:
    vocals_est: MonoSignal
    instrumental_est: MonoSignal
    method: str  # "center_cancel" | "fastica"
    diagnostics: Diagnostics
    mixing: MixingEstimate | None = None


def correlation(a: np.ndarray, b: np.ndarray) -> float:
    """Pearson correlation; 0.0 when either input has no variance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if len(a) != len(b):
        raise ValueError("correlation needs equal-length arrays")
    a = a - a.mean()
    b = b - b.mean()
    denom = np.sqrt((a * a).sum() * (b * b).sum())
    if denom == 0.0:
        return 0.0
    return float((a * b).sum() / denom)


def cancel_center(buf: AudioBuffer) -> SeparationResult:
    """Mid/side split of a stereo buffer.

    instrumental_est is the saturated side signal L - R (center content
    cancels out of it); vocals_est is the mid signal (L + R) / 2. Identical
    channels therefore produce a bit-exact silent instrumental.
    """
    left, right = split_channels(buf)
    side = saturate16(left.samples.astype(np.int32) - right.samples.astype(np.int32))
    mid = downmix(buf)
    diag = Diagnostics(
        iterations=0,
        converged=True,
        component_correlation=correlation(mid.samples, side),
        note="mid/side estimates; no iteration involved",
    )
    return SeparationResult(
        vocals_est=mid,
        instrumental_est=MonoSignal(buf.sample_rate, side),
        method="center_cancel",
        diagnostics=diag,
    )


def whiten(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Center, decorrelate, and unit-scale a 2xN float matrix.

    Returns (z, w, means) with z = w @ (x - means) having identity
    covariance. Constant or linearly dependent channels cannot be whitened
    and raise DegenerateInputError.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] != 2 or x.shape[1] < 2:
        raise DegenerateInputError("whitening needs a 2xN matrix with N >= 2")
    means = x.mean(axis=1)
    centered = x - means[:, None]
    cov = centered @ centered.T / x.shape[1]
    if cov[0, 0] <= 0.0 or cov[1, 1] <= 0.0:
        raise DegenerateInputError("a channel is constant; cannot whiten")
    evals, evecs = np.linalg.eigh(cov)
    if evals[0] <= 1e-12 * evals[1]:
        raise DegenerateInputError("channels are linearly dependent; cannot whiten")
    w = (evecs / np.sqrt(evals)).T  # rows: eigenvector_i / sqrt(eigenvalue_i)
    return w @ centered, w, means


def _sym_orth(w: np.ndarray) -> np.ndarray:
    # W <- (W W^T)^(-1/2) W keeps both rows orthonormal without favoring one
    evals, evecs = np.linalg.eigh(w @ w.T)
    if evals[0] <= 0.0:
        raise DegenerateInputError("unmixing estimate collapsed to rank one")
    return evecs @ np.diag(1.0 / np.sqrt(evals)) @ evecs.T @ w


def fastica2(
    buf: AudioBuffer,
    max_iter: int = 200,
    tol: float = 1e-4,
    seed: int = 0,
    contrast: str = "logcosh",
    rescale: str = "peak",
) -> SeparationResult:
    """Two-source FastICA on a stereo buffer.

    Deterministic for a given seed. Convergence is declared when every row
    of the unmixing matrix stops rotating (max |1 - |<w_new, w_old>|| below
    ``tol``); hitting ``max_iter`` first is reported, not raised.
    """
    if contrast not in CONTRASTS:
        raise ValueError(f"unknown contrast {contrast!r}; pick from {sorted(CONTRASTS)}")
    g, g_prime = CONTRASTS[contrast]
    left, right = split_channels(buf)
    x = np.vstack([left.samples, right.samples]).astype(np.float64)
    z, whitening, means = whiten(x)
    n = z.shape[1]

    rng = np.random.default_rng(seed)
    w = _sym_orth(rng.standard_normal((2, 2)))
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        proj = w @ z
        gu = g(proj)
        w_new = gu @ z.T / n - np.diag(g_prime(proj).mean(axis=1)) @ w
        w_new = _sym_orth(w_new)
        delta = float(np.max(np.abs(1.0 - np.abs(np.sum(w_new * w, axis=1)))))
        w = w_new
        if delta < tol:
            converged = True
            break

    components = w @ z
    diag = Diagnostics(
        iterations=iterations,
        converged=converged,
        component_correlation=abs(correlation(components[0], components[1])),
        note="component order and sign are arbitrary; vocal/instrumental labels are positional",
    )
    return SeparationResult(
        vocals_est=rescale_component(components[0], mode=rescale, sample_rate=buf.sample_rate),
        instrumental_est=rescale_component(components[1], mode=rescale, sample_rate=buf.sample_rate),
        method="fastica",
        diagnostics=diag,
        mixing=MixingEstimate(unmixing=w, whitening=whitening, means=means),
    )


def rescale_component(
    component: np.ndarray, mode: str = "peak", sample_rate: int = 44100
) -> MonoSignal:
    """Turn a unit-variance float component back into int16 samples.

    ``peak`` scales the component so its absolute peak lands just under
    -1 dBFS (0.891 full scale) and rounds to nearest. ``gain100`` applies a
    fixed gain of 100x full scale with truncation, saturating heavily — the
    blunt make-it-audible option.
    """
    comp = np.asarray(component, dtype=np.float64)
    if not np.all(np.isfinite(comp)):
        raise DegenerateInputError("component contains non-finite values")
    if mode == "peak":
        peak = float(np.max(np.abs(comp))) if len(comp) else 0.0
        if peak == 0.0:
            return MonoSignal(sample_rate, np.zeros(len(comp), dtype=np.int16))
        scaled = np.rint(comp * (PEAK_TARGET / peak))
    elif mode == "gain100":
        scaled = np.trunc(comp * (32767.0 * 100.0))
    else:
        raise ValueError(f"unknown rescale mode {mode!r}; pick 'peak' or 'gain100'")
    return MonoSignal(sample_rate, saturate16(scaled))
