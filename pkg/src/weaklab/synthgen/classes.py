"""The ten procedural event classes.

Five short classes (transient foregrounds) and five long ones (sustained
textures). Each class pins a recipe name, a dominant frequency region that
keeps mel-domain spectral centroids apart, and a log-normal duration
distribution (median seconds, log-std).
"""

from __future__ import annotations

from dataclasses import dataclass

N_CLASSES = 10


@dataclass(frozen=True)
class EventClassSpec:
    class_id: int
    name: str
    family: str  # "short" | "long"
    recipe: str
    duration_median_s: float
    duration_log_std: float


CLASS_SPECS: tuple[EventClassSpec, ...] = (
    EventClassSpec(0, "ping", "short", "harmonic_ping", 0.55, 0.35),
    EventClassSpec(1, "clicks", "short", "impulse_train", 0.60, 0.35),
    EventClassSpec(2, "chirp", "short", "am_chirp", 0.80, 0.35),
    EventClassSpec(3, "burst", "short", "noise_burst", 0.50, 0.35),
    EventClassSpec(4, "ladder", "short", "tone_ladder", 1.00, 0.30),
    EventClassSpec(5, "drone", "long", "low_drone", 6.0, 0.25),
    EventClassSpec(6, "sawhum", "long", "saw_hum", 7.0, 0.25),
    EventClassSpec(7, "sweep", "long", "swept_noise", 5.0, 0.25),
    EventClassSpec(8, "noisebed", "long", "pulsed_noise_bed", 8.0, 0.25),
    EventClassSpec(9, "humhiss", "long", "hum_plus_hiss", 6.0, 0.25),
)

SHORT_CLASS_IDS = tuple(c.class_id for c in CLASS_SPECS if c.family == "short")
LONG_CLASS_IDS = tuple(c.class_id for c in CLASS_SPECS if c.family == "long")


def class_spec(class_id: int) -> EventClassSpec:
    if not 0 <= class_id < N_CLASSES:
        raise ValueError(f"unknown class_id {class_id}, expected 0..{N_CLASSES - 1}")
    return CLASS_SPECS[class_id]
