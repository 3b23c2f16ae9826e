"""Foreground event synthesis.

``synth_event(class_id, duration_s, seed)`` is a pure function: the seed
stands in for a concrete source recording, so two clips that share a seed
share the same timbre parameters (pitch offsets, rates) while the duration
controls only length and envelope. Timbre parameters are drawn from an RNG
keyed on (class_id, seed) alone.
"""

from __future__ import annotations

import numpy as np

from ..dsp import SAMPLE_RATE
from .classes import N_CLASSES, class_spec

FloatArray = np.ndarray

_TIMBRE_SALT = 0x5EED01


def _timbre_rng(class_id: int, seed: int) -> np.random.Generator:
    return np.random.default_rng([_TIMBRE_SALT, class_id, seed])


def _edge_ramp(n: int, ramp_s: float = 0.01) -> FloatArray:
    """Raised-cosine attack/release to avoid clicks at the event borders."""
    r = min(int(ramp_s * SAMPLE_RATE), max(n // 4, 1))
    env = np.ones(n)
    if r > 0:
        ramp = 0.5 - 0.5 * np.cos(np.pi * np.arange(r) / r)
        env[:r] = ramp
        env[-r:] = ramp[::-1]
    return env


def _band_noise(rng: np.random.Generator, n: int, lo_hz: float, hi_hz: float) -> FloatArray:
    """White noise FFT-masked to [lo, hi] Hz with soft 60 Hz skirts."""
    white = rng.standard_normal(n)
    spec = np.fft.rfft(white)
    freqs = np.fft.rfftfreq(n, 1.0 / SAMPLE_RATE)
    skirt = 60.0
    gain = np.clip((freqs - (lo_hz - skirt)) / skirt, 0.0, 1.0)
    gain *= np.clip(((hi_hz + skirt) - freqs) / skirt, 0.0, 1.0)
    return np.fft.irfft(spec * gain, n=n)


def _rms_normalize(x: FloatArray) -> FloatArray:
    rms = np.sqrt(np.mean(x**2))
    if rms <= 0:
        raise ValueError("event recipe produced silence")
    return x / rms


def _t(n: int) -> FloatArray:
    return np.arange(n) / SAMPLE_RATE


def _harmonic_ping(rng, n):
    f0 = 320.0 * 2.0 ** rng.uniform(-0.12, 0.12)
    t = _t(n)
    tau = max(n / SAMPLE_RATE / 3.0, 0.05)
    x = np.zeros(n)
    for h, amp in ((1, 1.0), (2, 0.5), (3, 0.33), (4, 0.25)):
        x += amp * np.sin(2 * np.pi * f0 * h * t + rng.uniform(0, 2 * np.pi))
    return x * np.exp(-t / tau)


def _impulse_train(rng, n):
    rate = 16.0 * 2.0 ** rng.uniform(-0.3, 0.3)
    fc = 3900.0 * 2.0 ** rng.uniform(-0.08, 0.08)
    t_ir = _t(int(0.012 * SAMPLE_RATE))
    ir = np.sin(2 * np.pi * fc * t_ir) * np.exp(-t_ir / 0.003)
    x = np.zeros(n)
    step = max(int(SAMPLE_RATE / rate), 1)
    jitter = int(0.15 * step)
    for start in range(0, n, step):
        s = start + (rng.integers(-jitter, jitter + 1) if jitter else 0)
        if 0 <= s < n:
            seg = min(ir.size, n - s)
            x[s : s + seg] += ir[:seg]
    if not np.any(x):
        x[: min(ir.size, n)] = ir[: min(ir.size, n)]
    return x


def _am_chirp(rng, n):
    t = _t(n)
    dur = n / SAMPLE_RATE
    f_lo = 750.0 * 2.0 ** rng.uniform(-0.07, 0.07)
    f_hi = 1200.0 * 2.0 ** rng.uniform(-0.07, 0.07)
    freq = f_lo + (f_hi - f_lo) * t / dur
    phase = 2 * np.pi * np.cumsum(freq) / SAMPLE_RATE
    am = 1.0 - 0.5 * (0.5 + 0.5 * np.sin(2 * np.pi * 7.0 * t + rng.uniform(0, 2 * np.pi)))
    return np.sin(phase) * am


def _noise_burst(rng, n):
    center = 2300.0 * 2.0 ** rng.uniform(-0.06, 0.06)
    x = _band_noise(rng, n, center - 300.0, center + 300.0)
    t = _t(n)
    tau = max(n / SAMPLE_RATE / 2.5, 0.05)
    return x * np.exp(-t / tau)


def _tone_ladder(rng, n):
    base = 1350.0 * 2.0 ** rng.uniform(-0.05, 0.05)
    rungs = 4
    x = np.zeros(n)
    t = _t(n)
    for i in range(rungs):
        lo = int(n * i / rungs)
        hi = int(n * (i + 1) / rungs)
        if hi <= lo:
            continue
        f = base * 1.13**i
        seg = np.sin(2 * np.pi * f * t[: hi - lo] + rng.uniform(0, 2 * np.pi))
        x[lo:hi] = seg * _edge_ramp(hi - lo, 0.008)
    return x


def _low_drone(rng, n):
    f0 = 150.0 * 2.0 ** rng.uniform(-0.1, 0.1)
    t = _t(n)
    vib = 1.0 + 0.01 * np.sin(2 * np.pi * 0.3 * t + rng.uniform(0, 2 * np.pi))
    x = np.zeros(n)
    for h, amp in ((1, 1.0), (2, 0.6), (3, 0.35)):
        x += amp * np.sin(2 * np.pi * f0 * h * np.cumsum(vib) / SAMPLE_RATE)
    wobble = 1.0 + 0.2 * np.sin(2 * np.pi * 0.2 * t + rng.uniform(0, 2 * np.pi))
    return x * wobble


def _saw_hum(rng, n):
    f0 = 490.0 * 2.0 ** rng.uniform(-0.06, 0.06)
    t = _t(n)
    x = np.zeros(n)
    for h in range(1, 13):
        x += np.sin(2 * np.pi * f0 * h * t) / h
    wobble = 1.0 + 0.15 * np.sin(2 * np.pi * 0.35 * t + rng.uniform(0, 2 * np.pi))
    return x * wobble


def _swept_noise(rng, n):
    t = _t(n)
    baseband = _band_noise(rng, n, 0.0, 250.0)
    center = 3200.0 + 500.0 * np.sin(2 * np.pi * 0.23 * t + rng.uniform(0, 2 * np.pi))
    phase = 2 * np.pi * np.cumsum(center) / SAMPLE_RATE
    return baseband * np.cos(phase) * 2.0


def _pulsed_noise_bed(rng, n):
    x = _band_noise(rng, n, 4900.0, 5600.0)
    t = _t(n)
    am = 1.0 - 0.6 * (0.5 + 0.5 * np.sin(2 * np.pi * 1.8 * t + rng.uniform(0, 2 * np.pi)))
    return x * am


def _hum_plus_hiss(rng, n):
    t = _t(n)
    hum = np.sin(2 * np.pi * 235.0 * t) + 0.4 * np.sin(2 * np.pi * 470.0 * t + 1.0)
    hiss = _band_noise(rng, n, 6600.0, 7800.0)
    hum = _rms_normalize(hum) * np.sqrt(0.2)
    hiss = _rms_normalize(hiss) * np.sqrt(0.8)
    return hum + hiss


_RECIPES = {
    "harmonic_ping": _harmonic_ping,
    "impulse_train": _impulse_train,
    "am_chirp": _am_chirp,
    "noise_burst": _noise_burst,
    "tone_ladder": _tone_ladder,
    "low_drone": _low_drone,
    "saw_hum": _saw_hum,
    "swept_noise": _swept_noise,
    "pulsed_noise_bed": _pulsed_noise_bed,
    "hum_plus_hiss": _hum_plus_hiss,
}


def synth_event(class_id: int, duration_s: float, seed: int) -> FloatArray:
    """Deterministic event waveform of round(duration * 16000) samples, unit RMS."""
    if not 0 <= class_id < N_CLASSES:
        raise ValueError(f"unknown class_id {class_id}, expected 0..{N_CLASSES - 1}")
    if duration_s <= 0:
        raise ValueError(f"duration must be positive, got {duration_s}")
    n = int(round(duration_s * SAMPLE_RATE))
    if n == 0:
        raise ValueError(f"duration {duration_s} s is below one sample")
    spec = class_spec(class_id)
    rng = _timbre_rng(class_id, seed)
    x = _RECIPES[spec.recipe](rng, n)
    x = _rms_normalize(x * _edge_ramp(n))
    return x
