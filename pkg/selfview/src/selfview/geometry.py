"""Heuristic mapping from facial keypoints to detector signals.

Pure functions: the same FaceGeometry always yields the same signals. The
constants are calibrated against the procedural faces in ``facegen`` and are
deliberately coarse; this is the hermetic fallback for when no learned FER
backend is installed, not a recognition model.

Pose convention matches the engine wire format: camera frame +x right,
+y down, +z into the screen; rotation composed as Ry(yaw) Rx(pitch) Rz(roll),
angles in degrees.
"""

from __future__ import annotations

import math

from .landmarks import FaceGeometry

# Mouth-corner raise (fraction of face height) at a neutral mouth, and gains.
_CORNER_BIAS = 0.006
_VALENCE_GAIN = 16.0
_HAPPY_GAIN = 30.0
_SAD_GAIN = 25.0

# Eye openness (blob height / face height) at rest, and gains.
_OPEN_BASE = 0.085
_AROUSAL_GAIN = 8.0
_SURPRISE_KNEE = 0.12
_SURPRISE_GAIN = 12.0

_YAW_GAIN = 120.0
_PITCH_BASE = 0.36
_PITCH_GAIN = 150.0


def _clamp(x: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return lo if x < lo else hi if x > hi else x


def corner_raise(geometry: FaceGeometry) -> float:
    """How far the mouth corners sit above the mouth centroid (face-height units)."""
    corner_y = (geometry.mouth_left[1] + geometry.mouth_right[1]) / 2.0
    return (geometry.mouth_center[1] - corner_y) / geometry.box[3]


def affect_from_geometry(geometry: FaceGeometry) -> tuple[float, float]:
    """(valence, arousal) in [-1, 1]."""
    raise_excess = corner_raise(geometry) - _CORNER_BIAS
    valence = _clamp(_VALENCE_GAIN * raise_excess)
    arousal = _clamp(_AROUSAL_GAIN * (geometry.eye_openness - _OPEN_BASE))
    return valence, arousal


def emotions_from_geometry(geometry: FaceGeometry) -> dict[str, float]:
    """Blendshape-style confidences for the labels this stub can see.

    Anger needs brow geometry this finder does not extract, so the stub
    never reports it; the engine's icon gate simply never fires `vein` on
    stub input.
    """
    raise_excess = corner_raise(geometry) - _CORNER_BIAS
    happy = _clamp(_HAPPY_GAIN * raise_excess, 0.0, 1.0) if raise_excess > 0 else 0.0
    sad = _clamp(_SAD_GAIN * (-raise_excess - 0.01), 0.0, 1.0) if raise_excess < 0 else 0.0
    surprise = _clamp(_SURPRISE_GAIN * (geometry.eye_openness - _SURPRISE_KNEE), 0.0, 1.0)
    neutral = _clamp(1.0 - happy - sad - surprise, 0.0, 1.0)
    return {"happy": happy, "sad": sad, "surprise": surprise, "neutral": neutral}


def head_angles(geometry: FaceGeometry, aspect: float) -> tuple[float, float, float]:
    """(pitch, yaw, roll) degrees from eye/box layout.

    ``aspect`` is frame width/height, needed because keypoints are
    normalized per axis. Roll is positive when the viewer-left eye sits
    lower than the viewer-right eye (head top leaning toward viewer-left).
    """
    x, y, w, h = geometry.box
    dx = (geometry.eye_right[0] - geometry.eye_left[0]) * aspect
    dy = geometry.eye_right[1] - geometry.eye_left[1]
    roll = math.degrees(math.atan2(dy, dx)) if dx > 0 else 0.0

    mid_x = (geometry.eye_left[0] + geometry.eye_right[0]) / 2.0
    yaw = _clamp(_YAW_GAIN * (mid_x - (x + w / 2.0)) / w, -60.0, 60.0)

    mid_y = (geometry.eye_left[1] + geometry.eye_right[1]) / 2.0
    pitch = _clamp(_PITCH_GAIN * (_PITCH_BASE - (mid_y - y) / h), -60.0, 60.0)
    return pitch, yaw, roll


def pose_matrix(pitch: float, yaw: float, roll: float) -> tuple[float, ...]:
    """Row-major 4x4 head transform, Ry(yaw) Rx(pitch) Rz(roll)."""
    p, yw, r = (math.radians(v) for v in (pitch, yaw, roll))
    cp, sp = math.cos(p), math.sin(p)
    cy, sy = math.cos(yw), math.sin(yw)
    cz, sz = math.cos(r), math.sin(r)
    return (
        cy * cz + sy * sp * sz, -cy * sz + sy * sp * cz, sy * cp, 0.0,
        cp * sz, cp * cz, -sp, 0.0,
        -sy * cz + cy * sp * sz, sy * sz + cy * sp * cz, cy * cp, 0.0,
        0.0, 0.0, 0.0, 1.0,
    )
