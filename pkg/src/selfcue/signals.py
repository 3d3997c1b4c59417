"""Domain value types exchanged between detectors, the engine, and renderers.

Everything here is an immutable value: instances can be shared freely across
threads. Validation of wire-level invariants lives in :mod:`selfcue.wire`;
these classes assume well-formed inputs.

Coordinate conventions: image coordinates are normalized to [0, 1] with +x
right and +y down. Pose matrices map the head-local frame into the camera
frame (+x right, +y down, +z into the screen), row-major 4x4 homogeneous.
"""

from __future__ import annotations

from dataclasses import dataclass, field

EMOTION_LABELS = ("happy", "sad", "surprise", "anger", "neutral")

# The four icon-bearing labels; `neutral` is a sink that never yields an icon.
ICON_BEARING_LABELS = ("happy", "sad", "surprise", "anger")

OUTLINE_COLORS = ("green", "blue", "red", "yellow")

ICON_KINDS = ("sparkle", "droplet", "exclamation", "vein")

FLASH_POLARITIES = ("positive", "negative")

TILT_DIRECTIONS = ("left", "right")

Point = tuple[float, float]
Segment = tuple[Point, Point]


@dataclass(frozen=True, slots=True)
class FrameSignal:
    """One timestamped detection sample from an upstream face detector.

    Attributes:
        t: Capture time in seconds, strictly increasing per stream.
        valence: Signed pleasantness in [-1, 1], or None. Present iff
            ``arousal`` is present.
        arousal: Activation in [-1, 1], or None.
        emotions: Map of emotion label to confidence in [0, 1], or None.
            Only the labels in EMOTION_LABELS are meaningful.
        pose: 16 floats, row-major 4x4 homogeneous head transform, or None.
        face_box: (x, y, w, h) normalized, w > 0 and h > 0, or None. When
            None the frame carries no detections at all.
    """

    t: float
    valence: float | None = None
    arousal: float | None = None
    emotions: dict[str, float] | None = None
    pose: tuple[float, ...] | None = None
    face_box: tuple[float, float, float, float] | None = None


@dataclass(frozen=True, slots=True)
class EulerAngles:
    """Head orientation as Tait-Bryan angles, in degrees.

    pitch rotates about the camera x-axis (nodding), yaw about y (shaking),
    roll about z (tilting). Each value is in [-180, 180].
    """

    pitch: float
    yaw: float
    roll: float


@dataclass(frozen=True, slots=True)
class Outline:
    """Face outline cue: one of the four quadrant colors plus an opacity."""

    color: str
    opacity: float


@dataclass(frozen=True, slots=True)
class TiltLine:
    opacity: float
    direction: str


@dataclass(frozen=True, slots=True)
class MovementLines:
    """Per-kind movement line cues; a kind is absent when None."""

    nod: float | None = None
    shake: float | None = None
    tilt: TiltLine | None = None

    def any(self) -> bool:
        return self.nod is not None or self.shake is not None or self.tilt is not None


@dataclass(frozen=True, slots=True)
class Flash:
    """Brief full-frame overlay signaling a sudden valence shift.

    ``alpha`` is constant for the lifetime of one flash; ``remaining`` counts
    down to zero as frames advance.
    """

    polarity: str
    remaining: float
    alpha: float


@dataclass(frozen=True, slots=True)
class PlacedOverlay:
    """Resolved placement geometry for one frame, in normalized coordinates.

    Segment lists are empty whenever the corresponding line cue is absent;
    ``outline_ellipse``/``icon_anchor``/``flash_rect`` are None when their
    cue is absent.
    """

    outline_ellipse: tuple[float, float, float, float] | None = None
    icon_anchor: Point | None = None
    nod_line_segments: tuple[Segment, ...] = ()
    shake_line_segments: tuple[Segment, ...] = ()
    tilt_line_segments: tuple[Segment, ...] = ()
    flash_rect: tuple[float, float, float, float] | None = None


@dataclass(frozen=True, slots=True)
class OverlayDirective:
    """Per-frame render instruction set.

    Directives carry only abstract cues (color names, icon kinds, opacities,
    geometry); raw emotion labels and raw valence/arousal values never appear
    so that serialized output stays free of interpretable affect data.
    """

    t: float
    outline: Outline | None = None
    icons: tuple[str, ...] = ()
    lines: MovementLines | None = None
    flash: Flash | None = None
    desaturate_background: bool = False
    geometry: PlacedOverlay | None = None


@dataclass(frozen=True, slots=True)
class Annotation:
    """Ground-truth event marker emitted alongside synthetic traces.

    ``kind`` names an expected engine event ("nod", "flash_negative",
    "icon_vein", ...). Kinds ending in "_absent" assert that no such event
    begins inside [t_onset, t_end].
    """

    t_onset: float
    kind: str
    t_end: float | None = None
