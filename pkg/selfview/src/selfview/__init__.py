"""selfview: a private, mirrored self-view window with expression overlays.

Captures webcam frames, extracts facial signals with a pluggable detector
backend, streams them to the interpretation engine over a pipe, and renders
the returned overlay directives on top of the video. All processing stays on
this machine: the module contains no network I/O.
"""

from .backends import BackendUnavailable, DetectorSample, StubBackend, resolve_backend
from .engine_client import EngineClient, EngineDied
from .geometry import affect_from_geometry, emotions_from_geometry, head_angles
from .landmarks import FaceGeometry, find_face_geometry
from .render import render_directive
from .wire import DirectiveView, WireError, frame_line, parse_directive_line

__version__ = "0.1.0"

__all__ = [
    "BackendUnavailable",
    "DetectorSample",
    "DirectiveView",
    "EngineClient",
    "EngineDied",
    "FaceGeometry",
    "StubBackend",
    "WireError",
    "affect_from_geometry",
    "emotions_from_geometry",
    "find_face_geometry",
    "frame_line",
    "head_angles",
    "parse_directive_line",
    "render_directive",
    "resolve_backend",
]
