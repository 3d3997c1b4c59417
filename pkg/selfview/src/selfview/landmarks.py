"""Classical face-geometry finder: face region, eyes, and mouth.

Model-free by design so the app works hermetically: the face is located as
the dominant bright elliptical region, eyes as the two largest dark blobs in
its upper half, the mouth as the largest dark blob in its lower half. Blob
search is masked to the face contour's interior so the background never
leaks in. That is enough signal for the heuristic affect stub; a learned
landmark detector can replace this module behind the same FaceGeometry
interface.

All outputs are in normalized image coordinates (+x right, +y down).
"""

from __future__ import annotations

from dataclasses import dataclass

import cv2
import numpy as np

_MIN_FACE_AREA_FRAC = 0.02
_MIN_BLOB_AREA_FRAC = 0.0008   # of the face box
_MAX_BLOB_AREA_FRAC = 0.2
_FEATURE_SPLIT = 0.62          # feature/skin intensity split, fraction of interior mean


@dataclass(frozen=True)
class FaceGeometry:
    """Normalized facial keypoints extracted from one frame."""

    box: tuple[float, float, float, float]           # x, y, w, h
    eye_left: tuple[float, float]                     # viewer-left eye center
    eye_right: tuple[float, float]
    eye_openness: float                               # mean eye height / face height
    mouth_left: tuple[float, float]                   # mouth corners
    mouth_right: tuple[float, float]
    mouth_center: tuple[float, float]                 # mouth blob centroid


def _largest_contour(mask: np.ndarray):
    contours, _ = cv2.findContours(mask, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
    if not contours:
        return None
    return max(contours, key=cv2.contourArea)


def find_face_geometry(frame_bgr: np.ndarray) -> FaceGeometry | None:
    """Locate the face and its keypoints, or None when no face is found."""
    if frame_bgr is None or frame_bgr.size == 0:
        return None
    height, width = frame_bgr.shape[:2]
    gray = cv2.cvtColor(frame_bgr, cv2.COLOR_BGR2GRAY)

    # Face region: dominant bright blob (a lit face against the background).
    blur = cv2.GaussianBlur(gray, (15, 15), 0)
    _, bright = cv2.threshold(blur, 0, 255, cv2.THRESH_BINARY + cv2.THRESH_OTSU)
    face_contour = _largest_contour(bright)
    if face_contour is None:
        return None
    bx, by, bw, bh = cv2.boundingRect(face_contour)
    if bw * bh < _MIN_FACE_AREA_FRAC * width * height:
        return None

    # Search for dark features only inside the face contour (eroded so the
    # anti-aliased boundary cannot masquerade as a feature).
    interior = np.zeros((height, width), dtype=np.uint8)
    cv2.drawContours(interior, [face_contour], -1, 255, -1)
    erode_px = max(3, bh // 40)
    interior = cv2.erode(interior, np.ones((erode_px, erode_px), np.uint8))
    face_mask = interior[by:by + bh, bx:bx + bw]
    face_gray = gray[by:by + bh, bx:bx + bw]

    inside = face_mask > 0
    if not inside.any():
        return None
    split = _FEATURE_SPLIT * float(face_gray[inside].mean())
    dark = ((face_gray < split) & inside).astype(np.uint8) * 255

    contours, _ = cv2.findContours(dark, cv2.RETR_EXTERNAL, cv2.CHAIN_APPROX_SIMPLE)
    min_area = _MIN_BLOB_AREA_FRAC * bw * bh
    max_area = _MAX_BLOB_AREA_FRAC * bw * bh
    blobs = []
    for contour in contours:
        area = cv2.contourArea(contour)
        if not min_area <= area <= max_area:
            continue
        m = cv2.moments(contour)
        if m["m00"] == 0:
            continue
        blobs.append((m["m10"] / m["m00"], m["m01"] / m["m00"], area, contour))

    upper = [b for b in blobs if b[1] < 0.45 * bh]
    lower = [b for b in blobs if b[1] >= 0.45 * bh]
    if len(upper) < 2 or not lower:
        return None

    upper.sort(key=lambda b: b[2], reverse=True)
    eye_a, eye_b = upper[0], upper[1]
    if eye_a[0] > eye_b[0]:
        eye_a, eye_b = eye_b, eye_a

    h_a = cv2.boundingRect(eye_a[3])[3]
    h_b = cv2.boundingRect(eye_b[3])[3]
    openness = (h_a + h_b) / 2.0 / bh

    mouth = max(lower, key=lambda b: b[2])
    contour = mouth[3].reshape(-1, 2)
    left_pt = contour[contour[:, 0].argmin()]
    right_pt = contour[contour[:, 0].argmax()]

    def norm(px: float, py: float) -> tuple[float, float]:
        return (bx + px) / width, (by + py) / height

    return FaceGeometry(
        box=(bx / width, by / height, bw / width, bh / height),
        eye_left=norm(eye_a[0], eye_a[1]),
        eye_right=norm(eye_b[0], eye_b[1]),
        eye_openness=openness,
        mouth_left=norm(float(left_pt[0]), float(left_pt[1])),
        mouth_right=norm(float(right_pt[0]), float(right_pt[1])),
        mouth_center=norm(mouth[0], mouth[1]),
    )
