"""Procedural face drawing: the synthetic camera and the test fixtures.

Draws a schematic but geometrically honest face (bright oval, dark eyes,
dark mouth crescent) whose expression parameters map directly onto what the
landmark finder measures: ``smile`` bends the mouth corners up or down,
``eye_open`` scales the eye blobs, ``tilt_deg`` rolls the whole feature set.
"""

from __future__ import annotations

import math

import cv2
import numpy as np

SKIN = (150, 170, 225)          # BGR
FEATURE = (40, 30, 25)
BACKGROUND = (60, 55, 50)


def draw_face(width: int = 640, height: int = 480, *,
              center: tuple[float, float] = (0.5, 0.5),
              face_scale: float = 0.33,
              smile: float = 1.0,
              eye_open: float = 1.0,
              tilt_deg: float = 0.0) -> np.ndarray:
    """Render a face frame.

    Args:
        center: face center in normalized coordinates.
        face_scale: face half-height as a fraction of the frame height.
        smile: +1 full smile, 0 flat mouth, -1 frown.
        eye_open: eye height multiplier (1 = normal, >1 wide, <0.5 sleepy).
        tilt_deg: roll of the feature layout, positive tilts the top of the
            head toward the viewer's left.
    """
    frame = np.full((height, width, 3), BACKGROUND, dtype=np.uint8)
    cx, cy = center[0] * width, center[1] * height
    ry = face_scale * height
    rx = 0.78 * ry

    cv2.ellipse(frame, (round(cx), round(cy)), (round(rx), round(ry)),
                0, 0, 360, SKIN, -1, cv2.LINE_AA)

    rad = math.radians(tilt_deg)
    cos_t, sin_t = math.cos(rad), math.sin(rad)

    def place(dx: float, dy: float) -> tuple[int, int]:
        # dx, dy in face-local units (fractions of ry), +y down; roll about center.
        px = dx * cos_t - dy * sin_t
        py = dx * sin_t + dy * cos_t
        return round(cx + px * ry), round(cy + py * ry)

    eye_rx = round(0.11 * ry)
    eye_ry = max(2, round(0.085 * ry * eye_open))
    for side in (-1, 1):
        cv2.ellipse(frame, place(side * 0.38, -0.28), (eye_rx, eye_ry),
                    tilt_deg, 0, 360, FEATURE, -1, cv2.LINE_AA)

    mouth_axes = (round(0.36 * ry), max(2, round(0.18 * ry * abs(smile) + 4)))
    mouth_center = place(0.0, 0.42)
    if smile >= 0:
        # Bottom half-ellipse: corners sit above the blob centroid.
        cv2.ellipse(frame, mouth_center, mouth_axes, tilt_deg, 0, 180,
                    FEATURE, -1, cv2.LINE_AA)
    else:
        cv2.ellipse(frame, mouth_center, mouth_axes, tilt_deg, 180, 360,
                    FEATURE, -1, cv2.LINE_AA)
    return frame


def blank_frame(width: int = 640, height: int = 480) -> np.ndarray:
    return np.full((height, width, 3), BACKGROUND, dtype=np.uint8)
