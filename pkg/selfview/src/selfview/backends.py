"""Detector backends: the interface, the hermetic stub, and optional models.

A backend turns one BGR frame into the signals the engine's wire format
carries, plus an optional segmentation mask for background desaturation.
The stub is pure classical CV (deterministic, no weights); the "real"
backend binds to a learned face/FER stack when one is importable and
otherwise reports itself unavailable so callers can fall back.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Protocol

import cv2
import numpy as np

from . import geometry as geom
from .landmarks import find_face_geometry


class BackendUnavailable(RuntimeError):
    """The requested backend cannot run in this environment."""


@dataclass(frozen=True)
class DetectorSample:
    """One frame's detections, already in wire-format conventions."""

    valence: float | None = None
    arousal: float | None = None
    emotions: dict[str, float] | None = None
    pose: tuple[float, ...] | None = None
    face_box: tuple[float, float, float, float] | None = None
    mask: np.ndarray | None = None  # uint8, 255 = keep saturated (face)

    @property
    def has_face(self) -> bool:
        return self.face_box is not None


class DetectorBackend(Protocol):
    name: str

    def analyze(self, frame_bgr: np.ndarray) -> DetectorSample: ...


class StubBackend:
    """Heuristic landmark-driven backend; deterministic per frame."""

    name = "stub"

    def analyze(self, frame_bgr: np.ndarray) -> DetectorSample:
        found = find_face_geometry(frame_bgr)
        if found is None:
            return DetectorSample()
        height, width = frame_bgr.shape[:2]
        valence, arousal = geom.affect_from_geometry(found)
        pitch, yaw, roll = geom.head_angles(found, width / height)

        x, y, w, h = found.box
        mask = np.zeros((height, width), dtype=np.uint8)
        cv2.ellipse(mask,
                    (round((x + w / 2) * width), round((y + h / 2) * height)),
                    (round(0.62 * w * width), round(0.62 * h * height)),
                    0, 0, 360, 255, -1)

        return DetectorSample(
            valence=valence,
            arousal=arousal,
            emotions=geom.emotions_from_geometry(found),
            pose=geom.pose_matrix(pitch, yaw, roll),
            face_box=found.box,
            mask=mask,
        )


class RealBackend:
    """Learned landmark/FER stack; present only when its imports resolve."""

    name = "real"

    def __init__(self) -> None:
        try:
            import mediapipe  # noqa: F401
        except ImportError as exc:
            raise BackendUnavailable(
                "no FER model stack installed (mediapipe not importable); "
                "install one or run with --backend stub") from exc
        raise BackendUnavailable(
            "a mediapipe install was found but no adapter is wired up yet; "
            "run with --backend stub")


def resolve_backend(choice: str) -> tuple[DetectorBackend, str | None]:
    """Instantiate the chosen backend.

    Returns (backend, notice); ``notice`` is a human-readable message when
    `auto` had to fall back to the stub.
    """
    if choice == "stub":
        return StubBackend(), None
    if choice == "real":
        return RealBackend(), None
    if choice == "auto":
        try:
            return RealBackend(), None
        except BackendUnavailable as exc:
            return StubBackend(), f"real backend unavailable ({exc}); using stub"
    raise ValueError(f"unknown backend {choice!r}")
