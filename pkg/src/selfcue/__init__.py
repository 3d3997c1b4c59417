"""selfcue: facial-signal streams in, private self-view overlay directives out.

The engine consumes per-frame detection samples (valence/arousal,
categorical expression confidences, head-pose matrices, face boxes) and
deterministically emits render instructions: outline color and opacity,
expression icons, movement lines, valence-shift flashes, and placement
geometry. It performs no detection and no rendering itself; both live in
companion processes speaking the JSONL wire formats in :mod:`selfcue.wire`.
"""

from .affect import AffectState, kalman_step, outline_opacity, quadrant_color, shift_detect
from .config import EngineConfig, load_config
from .engine import Session, SessionState, compose_frame, handle_gap, place_geometry
from .errors import (
    ConfigError,
    EngineError,
    NonMonotoneTimeError,
    NonOrthonormalError,
    ParseError,
)
from .headpose import extract_euler, pose_matrix, rotation_from_euler, validate_rotation
from .icons import select_icon
from .movement import MovementWindow, detect_movements
from .report import RunReport, extract_events, report_from_directives
from .signals import (
    Annotation,
    EulerAngles,
    Flash,
    FrameSignal,
    MovementLines,
    Outline,
    OverlayDirective,
    PlacedOverlay,
    TiltLine,
)
from .synth import Scenario, annotations, generate
from .wire import parse_directive, parse_frame, serialize_directive, serialize_frame

__version__ = "0.1.0"

__all__ = [
    "AffectState",
    "Annotation",
    "ConfigError",
    "EngineConfig",
    "EngineError",
    "EulerAngles",
    "Flash",
    "FrameSignal",
    "MovementLines",
    "MovementWindow",
    "NonMonotoneTimeError",
    "NonOrthonormalError",
    "Outline",
    "OverlayDirective",
    "ParseError",
    "PlacedOverlay",
    "RunReport",
    "Scenario",
    "Session",
    "SessionState",
    "TiltLine",
    "annotations",
    "compose_frame",
    "detect_movements",
    "extract_euler",
    "extract_events",
    "generate",
    "handle_gap",
    "kalman_step",
    "load_config",
    "outline_opacity",
    "parse_directive",
    "parse_frame",
    "place_geometry",
    "pose_matrix",
    "quadrant_color",
    "report_from_directives",
    "rotation_from_euler",
    "select_icon",
    "serialize_directive",
    "serialize_frame",
    "shift_detect",
    "validate_rotation",
]
