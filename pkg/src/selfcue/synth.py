"""Seeded synthetic frame-signal traces for tests, benchmarks, and demos.

Each scenario scripts valence/arousal, categorical confidences, and head
angles over time; the generator samples the script at the requested frame
rate, adds Gaussian measurement noise to the affect channel, and builds
valid pose matrices from the scripted angles. Alongside the frames, each
scenario exposes the ground-truth event schedule (expected cue kinds and
approximate onset times) for assertion against engine output.

Generation is fully deterministic given the Scenario (including seed).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Callable, Iterator

from .headpose import pose_matrix
from .signals import Annotation, FrameSignal

SCENARIO_KINDS = ("neutral", "smile", "frown_burst", "nod", "shake", "tilt",
                  "moment1", "moment2", "mixed")

FACE_BOX = (0.4, 0.3, 0.2, 0.3)

# Mild positive baseline preceding a frown burst. A burst must swing the
# smoothed valence by more than the default shift delta (0.6) to raise a
# flash, which a start at the exact origin cannot reach with a -0.5 frown.
_SETTLE_VA = (0.25, 0.1)
_FROWN_VA = (-0.5, 0.6)
_FROWN_LEN = 1.5
_RECOVER_LEN = 0.5
_SMILE_VA = (0.6, 0.3)
_SMILE_RAMP = 2.0
_SIN_HZ = 2.0
_NOD_AMP = 10.0
_SUBTLE_AMP = 3.0
_TILT_DEG = 20.0
_TILT_RAMP = 1.0

# Onset lag of a frown-burst flash: the smoothed valence needs ~0.4 s
# (12 frames at 30 fps with the default filter) to cross the shift delta.
_FLASH_LAG = 0.4
# Movement detection activates once the window is half full.
_FILL_LAG = 0.5


@dataclass(frozen=True, slots=True)
class Scenario:
    """A named synthetic recipe plus sampling parameters."""

    kind: str
    duration_s: float = 6.0
    fps: float = 30.0
    seed: int = 0
    noise_std: float = 0.05

    def __post_init__(self) -> None:
        if self.kind not in SCENARIO_KINDS:
            raise ValueError(f"unknown scenario kind {self.kind!r}")
        if not self.duration_s > 0:
            raise ValueError("duration_s must be positive")
        if not 5.0 <= self.fps <= 120.0:
            raise ValueError("fps must be in [5, 120]")
        if self.noise_std < 0:
            raise ValueError("noise_std must be non-negative")


@dataclass(frozen=True, slots=True)
class _Point:
    """Scripted signal values at one instant (pre-noise)."""

    va: tuple[float, float] | None
    emotions: dict[str, float] | None
    angles: tuple[float, float, float]


Script = Callable[[float], _Point]


def _neutral(t: float) -> _Point:
    return _Point((0.0, 0.0), {"neutral": 0.95}, (0.0, 0.0, 0.0))


def _smile(t: float) -> _Point:
    p = min(1.0, t / _SMILE_RAMP)
    happy = 0.9 * p
    return _Point((_SMILE_VA[0] * p, _SMILE_VA[1] * p),
                  {"happy": happy, "neutral": 0.9 * (1.0 - p)},
                  (0.0, 0.0, 0.0))


def _frown_burst(settle_len: float) -> Script:
    def script(t: float) -> _Point:
        if t < settle_len:
            return _Point(_SETTLE_VA, {"neutral": 0.9}, (0.0, 0.0, 0.0))
        if t < settle_len + _FROWN_LEN:
            return _Point(_FROWN_VA, {"anger": 0.9, "neutral": 0.05}, (0.0, 0.0, 0.0))
        p = min(1.0, (t - settle_len - _FROWN_LEN) / _RECOVER_LEN)
        return _Point((_FROWN_VA[0] * (1.0 - p), _FROWN_VA[1] * (1.0 - p)),
                      {"neutral": 0.9}, (0.0, 0.0, 0.0))
    return script


def _nod(t: float) -> _Point:
    pitch = _NOD_AMP * math.sin(2.0 * math.pi * _SIN_HZ * t)
    return _Point((0.4, 0.2), {"neutral": 0.9}, (pitch, 0.0, 0.0))


def _shake(t: float) -> _Point:
    yaw = _NOD_AMP * math.sin(2.0 * math.pi * _SIN_HZ * t)
    return _Point((0.0, 0.0), {"neutral": 0.9}, (0.0, yaw, 0.0))


def _tilt(t: float) -> _Point:
    roll = _TILT_DEG * min(1.0, t / _TILT_RAMP)
    return _Point((0.0, 0.0), {"neutral": 0.9}, (0.0, 0.0, roll))


def _moment2(half: float) -> Script:
    def script(t: float) -> _Point:
        amp = _SUBTLE_AMP if t < half else _NOD_AMP
        pitch = amp * math.sin(2.0 * math.pi * _SIN_HZ * t)
        return _Point((0.0, 0.0), {"neutral": 0.9}, (pitch, 0.0, 0.0))
    return script


def _script_for(sc: Scenario) -> Script:
    if sc.kind == "neutral":
        return _neutral
    if sc.kind == "smile":
        return _smile
    if sc.kind == "frown_burst":
        return _frown_burst(settle_len=1.5)
    if sc.kind == "nod":
        return _nod
    if sc.kind == "shake":
        return _shake
    if sc.kind == "tilt":
        return _tilt
    if sc.kind == "moment1":
        return _frown_burst(settle_len=2.0)
    if sc.kind == "moment2":
        return _moment2(half=sc.duration_s / 2.0)
    return _mixed_script(sc)


_MIX_SEGMENT_KINDS = ("neutral", "smile", "frown_burst", "nod", "shake", "tilt")


def _mixed_segments(sc: Scenario) -> list[tuple[float, float, str]]:
    """Seeded (start, length, kind) schedule covering the full duration."""
    rng = random.Random(sc.seed ^ 0x5EED)
    segments = []
    t = 0.0
    while t < sc.duration_s:
        kind = rng.choice(_MIX_SEGMENT_KINDS)
        length = rng.uniform(2.0, 4.0)
        segments.append((t, length, kind))
        t += length
    return segments


def _mixed_script(sc: Scenario) -> Script:
    segments = _mixed_segments(sc)
    scripts = {kind: _script_for(Scenario(kind, sc.duration_s, sc.fps))
               for kind in _MIX_SEGMENT_KINDS}

    def script(t: float) -> _Point:
        for start, length, kind in segments:
            if start <= t < start + length:
                return scripts[kind](t - start)
        return _neutral(t)
    return script


def _clamp(x: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return lo if x < lo else hi if x > hi else x


def frame_count(sc: Scenario) -> int:
    return round(sc.duration_s * sc.fps)


def generate(sc: Scenario) -> Iterator[FrameSignal]:
    """Yield the scenario's frames in order. Deterministic given ``sc``."""
    script = _script_for(sc)
    rng = random.Random(sc.seed)
    n = frame_count(sc)
    for k in range(n):
        t = k / sc.fps
        pt = script(t)
        valence = arousal = None
        if pt.va is not None:
            v, a = pt.va
            if sc.noise_std > 0.0:
                v += rng.gauss(0.0, sc.noise_std)
                a += rng.gauss(0.0, sc.noise_std)
            valence, arousal = _clamp(v), _clamp(a)
        pitch, yaw, roll = pt.angles
        yield FrameSignal(
            t=t,
            valence=valence,
            arousal=arousal,
            emotions=dict(pt.emotions) if pt.emotions is not None else None,
            pose=pose_matrix(pitch, yaw, roll),
            face_box=FACE_BOX,
        )


def annotations(sc: Scenario) -> list[Annotation]:
    """Ground-truth event schedule for the scenario.

    Onset times are approximate (the engine's smoothing and window fill add
    lag); assertions should allow a few tenths of a second. The mixed
    scenario annotates icon events only: its segment transitions leave
    residue in the movement window and the valence history, so movement and
    flash onsets there are not scripted truths.
    """
    d = sc.duration_s
    out: list[Annotation] = []

    def add(t: float, kind: str, t_end: float | None = None) -> None:
        if t < d:
            out.append(Annotation(t_onset=t, kind=kind,
                                  t_end=min(t_end, d) if t_end is not None else None))

    if sc.kind == "smile":
        # Confidence 0.9 * (t / ramp) strictly exceeds 0.8 at t > 16/18 of the ramp.
        add(_SMILE_RAMP * (0.8 / 0.9), "icon_sparkle")
    elif sc.kind == "frown_burst":
        add(1.5, "icon_vein")
        add(1.5 + _FLASH_LAG, "flash_negative")
    elif sc.kind == "moment1":
        add(2.0, "icon_vein")
        add(2.0 + _FLASH_LAG, "flash_negative")
    elif sc.kind == "nod":
        add(_FILL_LAG, "nod")
    elif sc.kind == "shake":
        add(_FILL_LAG, "shake")
    elif sc.kind == "tilt":
        # Window mean of the ramp-then-hold roll crosses the 12 deg gate
        # at ~1.11 s (closed-form integral of the scripted ramp).
        add(1.106, "tilt")
    elif sc.kind == "moment2":
        half = d / 2.0
        add(_FILL_LAG, "nod_absent", t_end=half)
        # Mixed-amplitude window crosses the variance gate once ~23% of it
        # holds 10-degree samples.
        add(half + 0.23, "nod")
    elif sc.kind == "mixed":
        for start, length, kind in _mixed_segments(sc):
            if kind == "smile" and length > _SMILE_RAMP * (0.8 / 0.9) + 0.1:
                add(start + _SMILE_RAMP * (0.8 / 0.9), "icon_sparkle")
            elif kind == "frown_burst" and length > 1.6:
                add(start + 1.5, "icon_vein")
    return out
