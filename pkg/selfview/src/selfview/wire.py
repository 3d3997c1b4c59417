"""The app's side of the engine wire protocol.

The engine contract is line-oriented JSONL: one frame line in, one directive
line out. The engine silently skips malformed frames (no output line), which
would deadlock a lockstep client, so every line is validated against the
published frame schema before it is written. Directive lines are parsed into
a small render model; the renderer draws exactly what they say and nothing
else.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

EMOTION_LABELS = ("happy", "sad", "surprise", "anger", "neutral")
ICON_KINDS = ("sparkle", "droplet", "exclamation", "vein")
OUTLINE_COLORS = ("green", "blue", "red", "yellow")


class WireError(ValueError):
    """A frame or directive violates the published schema."""


def _num(x: float) -> str:
    """Compact finite-number rendering for outgoing frames."""
    if not math.isfinite(x):
        raise WireError(f"non-finite value {x!r}")
    s = f"{x:.9g}"
    return s


def frame_line(t: float,
               valence: float | None = None,
               arousal: float | None = None,
               emotions: dict[str, float] | None = None,
               pose: tuple[float, ...] | None = None,
               face_box: tuple[float, float, float, float] | None = None) -> str:
    """Build and validate one frame line for the engine.

    Raises:
        WireError: the fields would violate the frame schema (the engine
            would drop the line and starve the lockstep loop).
    """
    if not math.isfinite(t) or t < 0:
        raise WireError(f"bad timestamp {t!r}")
    if (valence is None) != (arousal is None):
        raise WireError("valence and arousal must be present together")
    if face_box is None and (valence is not None or emotions is not None
                             or pose is not None):
        raise WireError("detection fields present without face_box")

    parts = ['{"t":', _num(t)]
    if valence is not None:
        if not -1.0 <= valence <= 1.0 or not -1.0 <= arousal <= 1.0:
            raise WireError("valence/arousal out of [-1, 1]")
        parts += [',"valence":', _num(valence), ',"arousal":', _num(arousal)]
    if emotions is not None:
        known = []
        for label in EMOTION_LABELS:
            if label in emotions:
                c = emotions[label]
                if not 0.0 <= c <= 1.0:
                    raise WireError(f"confidence out of range for {label}")
                known.append(f'"{label}":{_num(c)}')
        parts += [',"emotions":{', ",".join(known), "}"]
    if pose is not None:
        if len(pose) != 16:
            raise WireError("pose must carry 16 numbers")
        parts += [',"pose":[', ",".join(_num(v) for v in pose), "]"]
    if face_box is not None:
        x, y, w, h = face_box
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0 and 0.0 < w <= 1.0 and 0.0 < h <= 1.0):
            raise WireError("face_box out of range")
        parts += [',"face_box":[', ",".join(_num(v) for v in face_box), "]"]
    parts.append("}")
    return "".join(parts)


@dataclass(frozen=True)
class DirectiveView:
    """Render model of one directive line."""

    t: float
    outline_color: str | None = None
    outline_opacity: float = 0.0
    icons: tuple[str, ...] = ()
    nod_opacity: float | None = None
    shake_opacity: float | None = None
    tilt_opacity: float | None = None
    tilt_direction: str | None = None
    flash_polarity: str | None = None
    flash_alpha: float = 0.0
    desaturate_background: bool = False
    outline_ellipse: tuple[float, float, float, float] | None = None
    icon_anchor: tuple[float, float] | None = None
    nod_segments: tuple = ()
    shake_segments: tuple = ()
    tilt_segments: tuple = ()
    raw: str = field(default="", compare=False)


def parse_directive_line(line: str) -> DirectiveView:
    """Parse one engine output line into the render model.

    Raises:
        WireError: the line is not a directive object.
    """
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise WireError(f"invalid directive JSON: {exc}") from exc
    if not isinstance(obj, dict) or "t" not in obj:
        raise WireError("directive must be an object with t")

    outline = obj.get("outline") or {}
    lines = obj.get("lines") or {}
    tilt = lines.get("tilt") or {}
    flash = obj.get("flash") or {}
    geometry = obj.get("geometry") or {}

    def segs(name):
        return tuple(((p1[0], p1[1]), (p2[0], p2[1]))
                     for p1, p2 in geometry.get(name, ()))

    color = outline.get("color")
    if color is not None and color not in OUTLINE_COLORS:
        raise WireError(f"unknown outline color {color!r}")

    return DirectiveView(
        t=float(obj["t"]),
        outline_color=color,
        outline_opacity=float(outline.get("opacity", 0.0)),
        icons=tuple(obj.get("icons", ())),
        nod_opacity=lines.get("nod"),
        shake_opacity=lines.get("shake"),
        tilt_opacity=tilt.get("opacity"),
        tilt_direction=tilt.get("direction"),
        flash_polarity=flash.get("polarity"),
        flash_alpha=float(flash.get("alpha", 0.0)),
        desaturate_background=bool(obj.get("desaturate_background", False)),
        outline_ellipse=tuple(geometry["outline_ellipse"]) if "outline_ellipse" in geometry else None,
        icon_anchor=tuple(geometry["icon_anchor"]) if "icon_anchor" in geometry else None,
        nod_segments=segs("nod_line_segments"),
        shake_segments=segs("shake_line_segments"),
        tilt_segments=segs("tilt_line_segments"),
        raw=line.rstrip("\n"),
    )


def validate_frame_line(line: str) -> None:
    """Re-check an externally supplied frame line (trace replay) before send."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise WireError(f"invalid frame JSON: {exc}") from exc
    if not isinstance(obj, dict) or "t" not in obj:
        raise WireError("frame must be an object with t")
    if (obj.get("valence") is None) != (obj.get("arousal") is None):
        raise WireError("valence and arousal must be present together")
    if obj.get("face_box") is None and any(
            obj.get(k) is not None for k in ("valence", "emotions", "pose")):
        raise WireError("detection fields present without face_box")
