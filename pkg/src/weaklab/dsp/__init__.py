from .features import (
    FMAX,
    FMIN,
    FRAMES_PER_BLOCK,
    HOP_LENGTH,
    LOG_FLOOR,
    N_BINS,
    N_FFT,
    N_MELS,
    SAMPLE_RATE,
    WIN_LENGTH,
    LogMelFeature,
    Spectrogram,
    Standardizer,
    hz_to_mel,
    log_mel,
    mel_center_frequencies,
    mel_filterbank,
    mel_to_hz,
    n_frames,
    stft,
)
from .cache import read_feature, write_feature

__all__ = [
    "FMAX",
    "FMIN",
    "FRAMES_PER_BLOCK",
    "HOP_LENGTH",
    "LOG_FLOOR",
    "LogMelFeature",
    "N_BINS",
    "N_FFT",
    "N_MELS",
    "SAMPLE_RATE",
    "Spectrogram",
    "Standardizer",
    "WIN_LENGTH",
    "hz_to_mel",
    "log_mel",
    "mel_center_frequencies",
    "mel_filterbank",
    "mel_to_hz",
    "n_frames",
    "read_feature",
    "stft",
    "write_feature",
]
