"""Waveform -> log-mel feature extraction.

Framing: 25 ms Hann windows (400 samples at 16 kHz), 10 ms hop (160), FFT
size 512 with the window zero-padded symmetrically. Frames are centered on
t * hop via reflection padding, so a signal of n samples yields exactly
ceil(n / 160) frames. The mel stage projects the power spectrogram through
64 triangular, area-normalized filters spanning 0..8000 Hz and takes the
log with an additive floor.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

FloatArray = np.ndarray

SAMPLE_RATE = 16000
WIN_LENGTH = 400
HOP_LENGTH = 160
N_FFT = 512
N_BINS = N_FFT // 2 + 1
N_MELS = 64
FMIN = 0.0
FMAX = 8000.0
LOG_FLOOR = 1e-10

FRAMES_PER_BLOCK = 20  # one 200 ms aggregation block


@dataclass
class Spectrogram:
    """Magnitude spectrogram, frames x bins."""

    magnitudes: FloatArray

    @property
    def frames(self) -> int:
        return self.magnitudes.shape[0]

    @property
    def bins(self) -> int:
        return self.magnitudes.shape[1]


@dataclass
class LogMelFeature:
    """Log-mel matrix, frames x 64."""

    values: FloatArray

    @property
    def frames(self) -> int:
        return self.values.shape[0]

    @property
    def mels(self) -> int:
        return self.values.shape[1]


def n_frames(n_samples: int) -> int:
    return -(-n_samples // HOP_LENGTH)


def _padded_window() -> FloatArray:
    n = np.arange(WIN_LENGTH)
    hann = 0.5 - 0.5 * np.cos(2.0 * np.pi * n / WIN_LENGTH)  # periodic
    out = np.zeros(N_FFT)
    lo = (N_FFT - WIN_LENGTH) // 2
    out[lo : lo + WIN_LENGTH] = hann
    return out


_WINDOW = _padded_window()


def stft(samples: FloatArray) -> Spectrogram:
    """Magnitude STFT with frame t centered at sample t * 160."""
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError(f"stft expects a non-empty 1-d waveform, got shape {x.shape}")
    half = N_FFT // 2
    if x.size <= half:
        raise ValueError(f"waveform too short for reflection padding: {x.size} samples")
    frames = n_frames(x.size)
    pad_right = (frames - 1) * HOP_LENGTH + half - x.size + 1
    xp = np.pad(x, (half, max(pad_right, 0)), mode="reflect")
    strided = sliding_window_view(xp, N_FFT)[:: HOP_LENGTH][:frames]
    spec = np.abs(np.fft.rfft(strided * _WINDOW, n=N_FFT, axis=1))
    return Spectrogram(spec)


def hz_to_mel(f):
    return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)


def mel_to_hz(m):
    return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)


def mel_filterbank() -> FloatArray:
    """64 x 257 triangular filters, peak positions equally spaced in mel."""
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(FMIN), hz_to_mel(FMAX), N_MELS + 2))
    bin_hz = np.arange(N_BINS) * (SAMPLE_RATE / N_FFT)
    fb = np.zeros((N_MELS, N_BINS))
    for k in range(N_MELS):
        lo, mid, hi = edges_hz[k], edges_hz[k + 1], edges_hz[k + 2]
        up = (bin_hz - lo) / (mid - lo)
        down = (hi - bin_hz) / (hi - mid)
        fb[k] = np.maximum(0.0, np.minimum(up, down))
        fb[k] *= 2.0 / (hi - lo)  # equal-area normalization
    return fb


_MEL_FB = mel_filterbank()


def mel_center_frequencies() -> FloatArray:
    edges_hz = mel_to_hz(np.linspace(hz_to_mel(FMIN), hz_to_mel(FMAX), N_MELS + 2))
    return edges_hz[1:-1]


@dataclass
class Standardizer:
    """Per-mel-band affine normalization, fit on the training split."""

    mean: FloatArray
    std: FloatArray

    @classmethod
    def fit(cls, feature_matrix: FloatArray) -> "Standardizer":
        flat = np.asarray(feature_matrix, dtype=np.float64).reshape(-1, N_MELS)
        mean = flat.mean(axis=0)
        std = np.maximum(flat.std(axis=0), 1e-6)
        return cls(mean=mean, std=std)

    def apply(self, values: FloatArray) -> FloatArray:
        return ((values - self.mean) / self.std).astype(np.float32)


def log_mel(samples: FloatArray, standardizer: Standardizer | None = None) -> LogMelFeature:
    """log(mel . |STFT|^2 + floor), optionally standardized per band."""
    spec = stft(samples)
    power = spec.magnitudes**2
    mels = np.log(power @ _MEL_FB.T + LOG_FLOOR)
    if standardizer is not None:
        return LogMelFeature(standardizer.apply(mels))
    return LogMelFeature(mels.astype(np.float32))
