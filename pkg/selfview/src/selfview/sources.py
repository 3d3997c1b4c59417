"""Frame sources: webcam, synthetic animation, and recorded traces."""

from __future__ import annotations

import math
import time
from typing import Iterator

import cv2
import numpy as np

from .facegen import draw_face


class SourceError(RuntimeError):
    pass


class CameraSource:
    """Webcam frames timestamped on a monotonic clock."""

    def __init__(self, index: int):
        self._cap = cv2.VideoCapture(index)
        if not self._cap.isOpened():
            raise SourceError(f"cannot open camera {index}")
        self._t0 = time.monotonic()
        self._last_t = -1.0

    def frames(self) -> Iterator[tuple[float, np.ndarray]]:
        while True:
            ok, frame = self._cap.read()
            if not ok:
                return
            t = time.monotonic() - self._t0
            if t <= self._last_t:  # camera clocks can stall; keep t strict
                t = self._last_t + 1e-4
            self._last_t = t
            yield t, frame

    def close(self) -> None:
        self._cap.release()


class SyntheticSource:
    """Procedural face that smiles, widens its eyes, nods, and tilts.

    Stands in for camera hardware in tests and demos: every expressive
    channel the stub backend can read gets exercised over a repeating
    schedule. Deterministic; frames are paced only when ``realtime``.
    """

    def __init__(self, fps: float = 30.0, duration_s: float | None = None,
                 width: int = 640, height: int = 480, realtime: bool = False):
        self.fps = fps
        self.duration_s = duration_s
        self.width = width
        self.height = height
        self.realtime = realtime

    def frames(self) -> Iterator[tuple[float, np.ndarray]]:
        k = 0
        started = time.monotonic()
        while self.duration_s is None or k / self.fps < self.duration_s:
            t = k / self.fps
            phase = t % 12.0
            smile, eye_open, tilt = 0.15, 1.0, 0.0
            center_y = 0.5
            if phase < 3.0:
                smile = 1.0
            elif phase < 6.0:
                smile = -0.8
                eye_open = 0.7
            elif phase < 9.0:
                center_y = 0.5 + 0.05 * math.sin(2.0 * math.pi * 2.0 * t)  # nod bob
            else:
                tilt = 18.0
            frame = draw_face(self.width, self.height,
                              center=(0.5, center_y), smile=smile,
                              eye_open=eye_open, tilt_deg=tilt)
            if self.realtime:
                lag = started + t - time.monotonic()
                if lag > 0:
                    time.sleep(lag)
            yield t, frame
            k += 1

    def close(self) -> None:
        pass


class TraceSource:
    """Recorded frame lines for replay; yields (t, line) pairs."""

    def __init__(self, path: str):
        self.path = path

    def lines(self) -> Iterator[tuple[float, str]]:
        import json
        with open(self.path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                try:
                    t = float(json.loads(line)["t"])
                except (ValueError, KeyError, TypeError) as exc:
                    raise SourceError(f"bad trace line: {exc}") from exc
                yield t, line
