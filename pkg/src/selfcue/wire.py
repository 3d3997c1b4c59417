"""Line-oriented wire formats for frames and directives.

One JSON object per line, UTF-8. Serialization is canonical: fixed key
order, absent fields omitted, and numbers rendered with up to six
significant digits (positional notation for |x| in [1e-4, 1e7)), so equal
values always produce identical bytes on every platform. Parsing is total:
any byte sequence either yields a valid record or raises ParseError.

Frame schema:
    {"t": num, "valence": num?, "arousal": num?, "emotions": {label: num}?,
     "pose": [16 nums]?, "face_box": [x, y, w, h]?, "v": 1?}

Directive schema (keys in this order):
    {"t": num, "outline": {...}?, "icons": [...]?, "lines": {...}?,
     "flash": {...}?, "desaturate_background": bool, "geometry": {...}?}
"""

from __future__ import annotations

import json
import math
from typing import Any, MutableMapping

from .errors import ParseError
from .signals import (
    EMOTION_LABELS,
    FLASH_POLARITIES,
    ICON_KINDS,
    OUTLINE_COLORS,
    TILT_DIRECTIONS,
    Annotation,
    Flash,
    FrameSignal,
    MovementLines,
    Outline,
    OverlayDirective,
    PlacedOverlay,
    TiltLine,
)

WIRE_VERSION = 1

_FRAME_KEYS = frozenset({"v", "t", "valence", "arousal", "emotions", "pose", "face_box"})


def format_number(x: float) -> str:
    """Render a finite number canonically with <= 6 significant digits."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite number in wire output: {x}")
    if x == 0:
        return "0.0"
    ax = abs(x)
    if 1e-4 <= ax < 1e7:
        decimals = 5 - math.floor(math.log10(ax))
        s = f"{x:.{decimals}f}" if decimals > 0 else f"{x:.0f}"
        if "." in s:
            s = s.rstrip("0").rstrip(".")
    else:
        s = f"{x:.6g}"
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _reject_constant(name: str) -> float:
    raise ParseError(f"non-finite JSON number: {name}")


def _loads(line: str | bytes) -> Any:
    if isinstance(line, bytes):
        try:
            line = line.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"invalid UTF-8: {exc}") from exc
    try:
        return json.loads(line, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    except RecursionError as exc:  # deeply nested input
        raise ParseError("input nested too deeply") from exc


def _number(obj: Any, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ParseError(f"{path}: expected a number")
    v = float(obj)
    if not math.isfinite(v):
        raise ParseError(f"{path}: must be finite")
    return v


def parse_frame(line: str | bytes,
                warnings: MutableMapping[str, int] | None = None) -> FrameSignal:
    """Parse one frame line, enforcing the frame invariants.

    Unknown emotion labels and unknown top-level keys are dropped (counted
    in ``warnings`` when provided); structural violations raise ParseError.
    """
    obj = _loads(line)
    if not isinstance(obj, dict):
        raise ParseError("frame must be a JSON object")

    def warn(key: str) -> None:
        if warnings is not None:
            warnings[key] = warnings.get(key, 0) + 1

    version = obj.get("v")
    if version is not None and version != WIRE_VERSION:
        raise ParseError(f"unsupported wire version {version!r}")
    for key in obj:
        if key not in _FRAME_KEYS:
            warn("frame_unknown_key")

    if "t" not in obj:
        raise ParseError("missing t")
    t = _number(obj["t"], "t")
    if t < 0:
        raise ParseError("t must be non-negative")

    valence = arousal = None
    if obj.get("valence") is not None or obj.get("arousal") is not None:
        if obj.get("valence") is None or obj.get("arousal") is None:
            raise ParseError("valence and arousal must be present together")
        valence = _number(obj["valence"], "valence")
        arousal = _number(obj["arousal"], "arousal")
        if not -1.0 <= valence <= 1.0 or not -1.0 <= arousal <= 1.0:
            raise ParseError("valence/arousal out of [-1, 1]")

    emotions = None
    if obj.get("emotions") is not None:
        raw = obj["emotions"]
        if not isinstance(raw, dict):
            raise ParseError("emotions: expected an object")
        emotions = {}
        for label, conf in raw.items():
            c = _number(conf, f"emotions.{label}")
            if label not in EMOTION_LABELS:
                warn("emotion_unknown_label")
                continue
            if not 0.0 <= c <= 1.0:
                raise ParseError(f"emotions.{label}: confidence out of [0, 1]")
            emotions[label] = c

    pose = None
    if obj.get("pose") is not None:
        raw = obj["pose"]
        if not isinstance(raw, list) or len(raw) != 16:
            raise ParseError("pose: expected 16 numbers")
        pose = tuple(_number(v, f"pose[{i}]") for i, v in enumerate(raw))

    face_box = None
    if obj.get("face_box") is not None:
        raw = obj["face_box"]
        if not isinstance(raw, list) or len(raw) != 4:
            raise ParseError("face_box: expected [x, y, w, h]")
        x, y, w, h = (_number(v, f"face_box[{i}]") for i, v in enumerate(raw))
        if not (0.0 <= x <= 1.0 and 0.0 <= y <= 1.0 and 0.0 < w <= 1.0 and 0.0 < h <= 1.0):
            raise ParseError("face_box: coordinates out of range")
        face_box = (x, y, w, h)

    if face_box is None and (valence is not None or emotions is not None or pose is not None):
        raise ParseError("detection fields present without face_box")

    return FrameSignal(t=t, valence=valence, arousal=arousal,
                       emotions=emotions, pose=pose, face_box=face_box)


def serialize_frame(sig: FrameSignal) -> str:
    """Render a frame as its canonical wire line (without newline)."""
    out = ['{"t":', format_number(sig.t)]
    if sig.valence is not None and sig.arousal is not None:
        out.append(',"valence":')
        out.append(format_number(sig.valence))
        out.append(',"arousal":')
        out.append(format_number(sig.arousal))
    if sig.emotions is not None:
        out.append(',"emotions":{')
        first = True
        for label in EMOTION_LABELS:
            if label in sig.emotions:
                if not first:
                    out.append(",")
                out.append(f'"{label}":')
                out.append(format_number(sig.emotions[label]))
                first = False
        out.append("}")
    if sig.pose is not None:
        out.append(',"pose":[')
        out.append(",".join(format_number(v) for v in sig.pose))
        out.append("]")
    if sig.face_box is not None:
        out.append(',"face_box":[')
        out.append(",".join(format_number(v) for v in sig.face_box))
        out.append("]")
    out.append("}")
    return "".join(out)


def serialize_directive(d: OverlayDirective) -> str:
    """Render a directive as its canonical wire line (without newline)."""
    out = ['{"t":', format_number(d.t)]
    if d.outline is not None:
        out.append(',"outline":{"color":"')
        out.append(d.outline.color)
        out.append('","opacity":')
        out.append(format_number(d.outline.opacity))
        out.append("}")
    if d.icons:
        out.append(',"icons":[')
        out.append(",".join(f'"{k}"' for k in d.icons))
        out.append("]")
    if d.lines is not None and d.lines.any():
        out.append(',"lines":{')
        parts = []
        if d.lines.nod is not None:
            parts.append(f'"nod":{format_number(d.lines.nod)}')
        if d.lines.shake is not None:
            parts.append(f'"shake":{format_number(d.lines.shake)}')
        if d.lines.tilt is not None:
            parts.append(f'"tilt":{{"opacity":{format_number(d.lines.tilt.opacity)}'
                         f',"direction":"{d.lines.tilt.direction}"}}')
        out.append(",".join(parts))
        out.append("}")
    if d.flash is not None:
        out.append(',"flash":{"polarity":"')
        out.append(d.flash.polarity)
        out.append('","remaining":')
        out.append(format_number(d.flash.remaining))
        out.append(',"alpha":')
        out.append(format_number(d.flash.alpha))
        out.append("}")
    out.append(',"desaturate_background":')
    out.append("true" if d.desaturate_background else "false")
    if d.geometry is not None:
        out.append(',"geometry":{')
        parts = []
        g = d.geometry
        if g.outline_ellipse is not None:
            parts.append('"outline_ellipse":[' +
                         ",".join(format_number(v) for v in g.outline_ellipse) + "]")
        if g.icon_anchor is not None:
            parts.append('"icon_anchor":[' +
                         ",".join(format_number(v) for v in g.icon_anchor) + "]")
        for name, segs in (("nod_line_segments", g.nod_line_segments),
                           ("shake_line_segments", g.shake_line_segments),
                           ("tilt_line_segments", g.tilt_line_segments)):
            if segs:
                rendered = ",".join(
                    f"[[{format_number(ax)},{format_number(ay)}],"
                    f"[{format_number(bx)},{format_number(by)}]]"
                    for (ax, ay), (bx, by) in segs)
                parts.append(f'"{name}":[{rendered}]')
        if g.flash_rect is not None:
            parts.append('"flash_rect":[' +
                         ",".join(format_number(v) for v in g.flash_rect) + "]")
        out.append(",".join(parts))
        out.append("}")
    out.append("}")
    return "".join(out)


def _segments(raw: Any, path: str) -> tuple:
    if not isinstance(raw, list):
        raise ParseError(f"{path}: expected a list")
    segs = []
    for i, seg in enumerate(raw):
        if not isinstance(seg, list) or len(seg) != 2:
            raise ParseError(f"{path}[{i}]: expected [[x,y],[x,y]]")
        pts = []
        for j, pt in enumerate(seg):
            if not isinstance(pt, list) or len(pt) != 2:
                raise ParseError(f"{path}[{i}][{j}]: expected [x, y]")
            pts.append((_number(pt[0], path), _number(pt[1], path)))
        segs.append((pts[0], pts[1]))
    return tuple(segs)


def _opacity(value: Any, path: str) -> float:
    v = _number(value, path)
    if not 0.0 <= v <= 1.0:
        raise ParseError(f"{path}: out of [0, 1]")
    return v


def parse_directive(line: str | bytes) -> OverlayDirective:
    """Parse one directive line, enforcing the directive invariants."""
    obj = _loads(line)
    if not isinstance(obj, dict):
        raise ParseError("directive must be a JSON object")
    known = {"t", "outline", "icons", "lines", "flash",
             "desaturate_background", "geometry"}
    for key in obj:
        if key not in known:
            raise ParseError(f"unknown directive key {key!r}")
    if "t" not in obj:
        raise ParseError("missing t")
    t = _number(obj["t"], "t")

    outline = None
    if obj.get("outline") is not None:
        raw = obj["outline"]
        if not isinstance(raw, dict) or set(raw) != {"color", "opacity"}:
            raise ParseError("outline: expected {color, opacity}")
        if raw["color"] not in OUTLINE_COLORS:
            raise ParseError(f"outline.color: unknown color {raw['color']!r}")
        outline = Outline(raw["color"], _opacity(raw["opacity"], "outline.opacity"))

    icons: tuple[str, ...] = ()
    if obj.get("icons") is not None:
        raw = obj["icons"]
        if not isinstance(raw, list) or len(raw) > 1:
            raise ParseError("icons: expected a list with at most one entry")
        for kind in raw:
            if kind not in ICON_KINDS:
                raise ParseError(f"icons: unknown kind {kind!r}")
        icons = tuple(raw)

    lines = None
    if obj.get("lines") is not None:
        raw = obj["lines"]
        if not isinstance(raw, dict) or not raw or not set(raw) <= {"nod", "shake", "tilt"}:
            raise ParseError("lines: expected {nod?, shake?, tilt?}")
        nod = _opacity(raw["nod"], "lines.nod") if "nod" in raw else None
        shake = _opacity(raw["shake"], "lines.shake") if "shake" in raw else None
        tilt = None
        if "tilt" in raw:
            rt = raw["tilt"]
            if not isinstance(rt, dict) or set(rt) != {"opacity", "direction"}:
                raise ParseError("lines.tilt: expected {opacity, direction}")
            if rt["direction"] not in TILT_DIRECTIONS:
                raise ParseError(f"lines.tilt.direction: {rt['direction']!r}")
            tilt = TiltLine(_opacity(rt["opacity"], "lines.tilt.opacity"), rt["direction"])
        lines = MovementLines(nod=nod, shake=shake, tilt=tilt)

    flash = None
    if obj.get("flash") is not None:
        raw = obj["flash"]
        if not isinstance(raw, dict) or set(raw) != {"polarity", "remaining", "alpha"}:
            raise ParseError("flash: expected {polarity, remaining, alpha}")
        if raw["polarity"] not in FLASH_POLARITIES:
            raise ParseError(f"flash.polarity: {raw['polarity']!r}")
        remaining = _number(raw["remaining"], "flash.remaining")
        if remaining < 0:
            raise ParseError("flash.remaining: must be >= 0")
        flash = Flash(raw["polarity"], remaining, _opacity(raw["alpha"], "flash.alpha"))

    desat = obj.get("desaturate_background", False)
    if not isinstance(desat, bool):
        raise ParseError("desaturate_background: expected a boolean")

    geometry = None
    if obj.get("geometry") is not None:
        raw = obj["geometry"]
        if not isinstance(raw, dict):
            raise ParseError("geometry: expected an object")
        gknown = {"outline_ellipse", "icon_anchor", "nod_line_segments",
                  "shake_line_segments", "tilt_line_segments", "flash_rect"}
        for key in raw:
            if key not in gknown:
                raise ParseError(f"geometry: unknown key {key!r}")
        ellipse = anchor = rect = None
        if raw.get("outline_ellipse") is not None:
            e = raw["outline_ellipse"]
            if not isinstance(e, list) or len(e) != 4:
                raise ParseError("geometry.outline_ellipse: expected 4 numbers")
            ellipse = tuple(_number(v, "geometry.outline_ellipse") for v in e)
        if raw.get("icon_anchor") is not None:
            a = raw["icon_anchor"]
            if not isinstance(a, list) or len(a) != 2:
                raise ParseError("geometry.icon_anchor: expected [x, y]")
            anchor = (_number(a[0], "geometry.icon_anchor"),
                      _number(a[1], "geometry.icon_anchor"))
        if raw.get("flash_rect") is not None:
            f = raw["flash_rect"]
            if not isinstance(f, list) or len(f) != 4:
                raise ParseError("geometry.flash_rect: expected 4 numbers")
            rect = tuple(_number(v, "geometry.flash_rect") for v in f)
        geometry = PlacedOverlay(
            outline_ellipse=ellipse,
            icon_anchor=anchor,
            nod_line_segments=_segments(raw.get("nod_line_segments", []), "geometry.nod_line_segments"),
            shake_line_segments=_segments(raw.get("shake_line_segments", []), "geometry.shake_line_segments"),
            tilt_line_segments=_segments(raw.get("tilt_line_segments", []), "geometry.tilt_line_segments"),
            flash_rect=rect,
        )

    return OverlayDirective(t=t, outline=outline, icons=icons, lines=lines,
                            flash=flash, desaturate_background=desat,
                            geometry=geometry)


def serialize_annotation(a: Annotation) -> str:
    out = ['{"t_onset":', format_number(a.t_onset), ',"kind":"', a.kind, '"']
    if a.t_end is not None:
        out.append(',"t_end":')
        out.append(format_number(a.t_end))
    out.append("}")
    return "".join(out)


def parse_annotation(line: str | bytes) -> Annotation:
    obj = _loads(line)
    if not isinstance(obj, dict) or "t_onset" not in obj or "kind" not in obj:
        raise ParseError("annotation must carry t_onset and kind")
    t_end = obj.get("t_end")
    return Annotation(
        t_onset=_number(obj["t_onset"], "t_onset"),
        kind=str(obj["kind"]),
        t_end=_number(t_end, "t_end") if t_end is not None else None,
    )
