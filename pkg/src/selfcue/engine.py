"""Per-frame composition: orchestrates affect, movement, and icon cues.

``compose_frame`` is the engine entry point. It consumes one FrameSignal,
advances the per-session state, and emits exactly one OverlayDirective with
the same timestamp. Malformed per-field content is counted in
``SessionState.warning_counters`` and treated as absent; only a
non-monotone timestamp aborts.

A SessionState belongs to one stream and is updated strictly sequentially.
Separate sessions are independent and may run on different threads.
"""

from __future__ import annotations

from .affect import AffectState, kalman_step, outline_opacity, quadrant_color, shift_detect
from .config import EngineConfig
from .errors import NonMonotoneTimeError, NonOrthonormalError
from .headpose import extract_euler, validate_rotation
from .icons import select_icon
from .movement import MovementWindow, detect_movements
from .signals import (
    EMOTION_LABELS,
    Flash,
    FrameSignal,
    MovementLines,
    Outline,
    OverlayDirective,
    PlacedOverlay,
    Segment,
)

_DIAG = 0.7071067811865476  # unit 45-degree component
_TILT_RAY_GAP = 0.025


class SessionState:
    """Mutable state for one signal stream."""

    __slots__ = ("affect", "window", "last_face_t", "last_frame_t",
                 "frame_count", "warning_counters")

    def __init__(self) -> None:
        self.affect = AffectState()
        self.window = MovementWindow()
        self.last_face_t: float | None = None
        self.last_frame_t: float | None = None
        self.frame_count = 0
        self.warning_counters: dict[str, int] = {}

    def warn(self, key: str) -> None:
        self.warning_counters[key] = self.warning_counters.get(key, 0) + 1

    def reset_interpretation(self) -> None:
        """Drop filter, history, window, and flash state after a long gap."""
        self.affect = AffectState()
        self.window = MovementWindow()
        self.last_face_t = None


def handle_gap(state: SessionState, t: float, cfg: EngineConfig) -> SessionState:
    """Apply the face-absence policy as of time ``t``.

    Within ``hold_duration_s`` of the last face the affect state is kept (the
    outline keeps rendering at decayed opacity); past that everything resets
    and the next face re-initializes the filter from scratch.
    """
    if state.last_face_t is not None and t - state.last_face_t > cfg.hold_duration_s:
        state.reset_interpretation()
    return state


def compose_frame(state: SessionState, sig: FrameSignal,
                  cfg: EngineConfig) -> OverlayDirective:
    """Process one frame: mutate ``state`` and return its directive.

    Raises:
        NonMonotoneTimeError: ``sig.t`` does not advance past the previous
            frame of this session.
    """
    t = sig.t
    if state.last_frame_t is not None and t <= state.last_frame_t:
        raise NonMonotoneTimeError(f"t={t} does not advance past {state.last_frame_t}")
    handle_gap(state, t, cfg)

    outline: Outline | None = None
    icons: tuple[str, ...] = ()
    lines: MovementLines | None = None

    face = sig.face_box is not None
    if face:
        valence, arousal = sig.valence, sig.arousal
        if valence is not None or arousal is not None:
            if (valence is None or arousal is None
                    or not -1.0 <= valence <= 1.0 or not -1.0 <= arousal <= 1.0):
                state.warn("affect_invalid")
            else:
                v, a = kalman_step(state.affect, (valence, arousal), t, cfg)
                outline = Outline(quadrant_color(v, a), outline_opacity(v, a))
                shift_detect(state.affect, t, v, cfg)

        if sig.pose is not None:
            try:
                rotation = validate_rotation(sig.pose)
            except NonOrthonormalError:
                state.warn("pose_invalid")
            else:
                state.window.push(t, extract_euler(rotation), cfg)
                detected = detect_movements(state.window, cfg)
                if detected.any():
                    lines = detected

        if sig.emotions is not None:
            emotions = sig.emotions
            bad = False
            unknown = 0
            for label, c in emotions.items():
                if label not in EMOTION_LABELS:
                    unknown += 1
                elif not 0.0 <= c <= 1.0:
                    bad = True
            if unknown:
                state.warn("emotion_unknown_label")
            if bad:
                state.warn("emotion_invalid")
            else:
                icon = select_icon(emotions, cfg)
                if icon is not None:
                    icons = (icon,)

        state.last_face_t = t
    else:
        if (sig.valence is not None or sig.arousal is not None
                or sig.emotions is not None or sig.pose is not None):
            state.warn("fields_without_face")
        if state.last_face_t is not None and state.affect.initialized:
            # handle_gap guarantees gap <= hold_duration_s here.
            gap = t - state.last_face_t
            decay = max(0.0, 1.0 - gap / cfg.hold_duration_s)
            v, a = state.affect.v, state.affect.a
            outline = Outline(quadrant_color(v, a),
                              outline_opacity(v, a) * decay)

    flash: Flash | None = None
    active_until = state.affect.flash_active_until
    if active_until is not None and t < active_until:
        flash = Flash(polarity=state.affect.flash_polarity or "negative",
                      remaining=active_until - t,
                      alpha=cfg.shift.flash_alpha)

    geometry = None
    if face:
        geometry = _place(outline, icons, lines, flash, sig.face_box, cfg)
    directive = OverlayDirective(
        t=t,
        outline=outline,
        icons=icons,
        lines=lines,
        flash=flash,
        desaturate_background=face,
        geometry=geometry,
    )

    state.last_frame_t = t
    state.frame_count += 1
    return directive


def place_geometry(d: OverlayDirective,
                   face_box: tuple[float, float, float, float],
                   cfg: EngineConfig) -> PlacedOverlay:
    """Resolve the directive's cues to normalized coordinates around the face.

    The outline ellipse is centered on the box with semi-axes scaled a bit
    past its half-extents; the icon anchors just off the top-right corner
    (clamped into frame); movement lines occupy a thin band off the relevant
    edges; tilt lines form a dashed 45-degree ray off the upper corner on
    the tilt side. Segments may extend past [0, 1] for faces at the border;
    renderers clip.
    """
    return _place(d.outline, d.icons, d.lines, d.flash, face_box, cfg)


def _place(outline: Outline | None, icons: tuple[str, ...],
           lines: MovementLines | None, flash: Flash | None,
           face_box: tuple[float, float, float, float],
           cfg: EngineConfig) -> PlacedOverlay:
    g = cfg.geometry
    x, y, w, h = face_box

    ellipse = None
    if outline is not None:
        ellipse = (x + w / 2.0, y + h / 2.0,
                   (w / 2.0) * g.ellipse_scale, (h / 2.0) * g.ellipse_scale)

    anchor = None
    if icons:
        anchor = (min(1.0, max(0.0, x + w + g.icon_offset)),
                  min(1.0, max(0.0, y - g.icon_offset)))

    nod_segments: tuple[Segment, ...] = ()
    shake_segments: tuple[Segment, ...] = ()
    tilt_segments: tuple[Segment, ...] = ()
    if lines is not None:
        n = g.line_count
        if lines.nod is not None:
            x1, x2 = x + 0.15 * w, x + 0.85 * w
            segs = []
            for i in range(1, n + 1):
                off = g.line_band * i / n
                segs.append(((x1, y - off), (x2, y - off)))
                segs.append(((x1, y + h + off), (x2, y + h + off)))
            nod_segments = tuple(segs)
        if lines.shake is not None:
            y1, y2 = y + 0.15 * h, y + 0.85 * h
            segs = []
            for i in range(1, n + 1):
                off = g.line_band * i / n
                segs.append(((x - off, y1), (x - off, y2)))
                segs.append(((x + w + off, y1), (x + w + off, y2)))
            shake_segments = tuple(segs)
        if lines.tilt is not None:
            if lines.tilt.direction == "left":
                cx, ux = x, -_DIAG
            else:
                cx, ux = x + w, _DIAG
            segs = []
            for i in range(n):
                sx = cx + ux * _TILT_RAY_GAP * (2 * i + 1)
                sy = y - _DIAG * _TILT_RAY_GAP * (2 * i + 1)
                segs.append(((sx, sy),
                             (sx + ux * g.line_band, sy - _DIAG * g.line_band)))
            tilt_segments = tuple(segs)

    return PlacedOverlay(
        outline_ellipse=ellipse,
        icon_anchor=anchor,
        nod_line_segments=nod_segments,
        shake_line_segments=shake_segments,
        tilt_line_segments=tilt_segments,
        flash_rect=(0.0, 0.0, 1.0, 1.0) if flash is not None else None,
    )


class Session:
    """Convenience wrapper binding a SessionState to a config."""

    def __init__(self, cfg: EngineConfig | None = None):
        self.cfg = cfg if cfg is not None else EngineConfig()
        self.state = SessionState()

    def process(self, sig: FrameSignal) -> OverlayDirective:
        return compose_frame(self.state, sig, self.cfg)
