"""Draw overlay directives onto video frames.

The renderer is stateless and interpretation-free: it draws exactly what a
DirectiveView says (colors, opacities, geometry), holding no thresholds or
history of its own. Mirroring for the self-view happens here by flipping
the frame and reflecting geometry x-coordinates; the engine always works in
unmirrored camera space.
"""

from __future__ import annotations

import cv2
import numpy as np

from .wire import DirectiveView

# BGR render palette for the four outline colors and the flash tints.
COLOR_BGR = {
    "green": (80, 200, 60),
    "blue": (230, 140, 40),
    "red": (50, 50, 230),
    "yellow": (40, 200, 240),
}
FLASH_BGR = {"negative": (40, 40, 230), "positive": (70, 210, 70)}
ICON_BGR = (250, 250, 250)
LINE_BGR = (60, 220, 240)


def _mx(x: float, mirrored: bool) -> float:
    return 1.0 - x if mirrored else x


def _pt(x: float, y: float, width: int, height: int, mirrored: bool) -> tuple[int, int]:
    return round(_mx(x, mirrored) * width), round(y * height)


def _blend(frame: np.ndarray, overlay: np.ndarray, alpha: float) -> None:
    if alpha <= 0.0:
        return
    cv2.addWeighted(overlay, min(1.0, alpha), frame, 1.0 - min(1.0, alpha), 0.0, frame)


def _draw_icon(frame: np.ndarray, kind: str, cx: int, cy: int, size: int) -> None:
    t = max(2, size // 8)
    if kind == "sparkle":
        for ddx, ddy in ((1, 0), (0, 1), (1, 1), (1, -1)):
            cv2.line(frame, (cx - ddx * size, cy - ddy * size),
                     (cx + ddx * size, cy + ddy * size), ICON_BGR, t, cv2.LINE_AA)
    elif kind == "droplet":
        cv2.circle(frame, (cx, cy + size // 3), 2 * size // 3, ICON_BGR, -1, cv2.LINE_AA)
        pts = np.array([[cx, cy - size], [cx - size // 2, cy + size // 4],
                        [cx + size // 2, cy + size // 4]])
        cv2.fillPoly(frame, [pts], ICON_BGR, cv2.LINE_AA)
    elif kind == "exclamation":
        cv2.line(frame, (cx, cy - size), (cx, cy + size // 3), ICON_BGR, 2 * t, cv2.LINE_AA)
        cv2.circle(frame, (cx, cy + size), t, ICON_BGR, -1, cv2.LINE_AA)
    elif kind == "vein":
        # Comic popped-vein: four rounded bumps with a cross-shaped gap.
        radius = 2 * size // 3
        for start in (10, 100, 190, 280):
            cv2.ellipse(frame, (cx, cy), (radius, radius), 0,
                        start, start + 70, ICON_BGR, 2 * t, cv2.LINE_AA)


def render_directive(frame_bgr: np.ndarray, directive: DirectiveView,
                     mask: np.ndarray | None = None, *,
                     mirrored: bool = True,
                     debug: bool = False) -> np.ndarray:
    """Return a new frame with the directive's cues composited on.

    Args:
        frame_bgr: source video frame (unmirrored camera space).
        directive: cues to draw.
        mask: optional uint8 segmentation mask (255 = face, keep saturated).
        mirrored: flip horizontally for the self-view convention.
        debug: print the raw directive line at the bottom of the frame.
    """
    out = cv2.flip(frame_bgr, 1) if mirrored else frame_bgr.copy()
    height, width = out.shape[:2]

    if directive.desaturate_background:
        gray = cv2.cvtColor(cv2.cvtColor(out, cv2.COLOR_BGR2GRAY), cv2.COLOR_GRAY2BGR)
        faded = cv2.addWeighted(gray, 0.75, out, 0.25, 0.0)
        if mask is not None:
            m = cv2.flip(mask, 1) if mirrored else mask
            keep = m > 0
            faded[keep] = out[keep]
        out = faded

    if directive.outline_color is not None and directive.outline_ellipse is not None \
            and directive.outline_opacity > 0.0:
        cx, cy, rx, ry = directive.outline_ellipse
        layer = out.copy()
        cv2.ellipse(layer, _pt(cx, cy, width, height, mirrored),
                    (round(rx * width), round(ry * height)), 0, 0, 360,
                    COLOR_BGR[directive.outline_color],
                    max(3, height // 90), cv2.LINE_AA)
        _blend(out, layer, directive.outline_opacity)

    for name, segments, opacity in (
            ("nod", directive.nod_segments, directive.nod_opacity),
            ("shake", directive.shake_segments, directive.shake_opacity),
            ("tilt", directive.tilt_segments, directive.tilt_opacity)):
        if not segments or opacity is None or opacity <= 0.0:
            continue
        layer = out.copy()
        for (x1, y1), (x2, y2) in segments:
            cv2.line(layer, _pt(x1, y1, width, height, mirrored),
                     _pt(x2, y2, width, height, mirrored),
                     LINE_BGR, max(2, height // 160), cv2.LINE_AA)
        _blend(out, layer, opacity)

    if directive.icons and directive.icon_anchor is not None:
        ax, ay = _pt(*directive.icon_anchor, width, height, mirrored)
        size = max(10, height // 24)
        ax = min(max(ax, size), width - size)
        ay = min(max(ay, size), height - size)
        for kind in directive.icons:
            _draw_icon(out, kind, ax, ay, size)

    if directive.flash_polarity is not None and directive.flash_alpha > 0.0:
        layer = np.full_like(out, FLASH_BGR[directive.flash_polarity])
        _blend(out, layer, directive.flash_alpha)

    if debug and directive.raw:
        text = directive.raw[:180]
        cv2.putText(out, text, (8, height - 10), cv2.FONT_HERSHEY_SIMPLEX,
                    0.35, (255, 255, 255), 1, cv2.LINE_AA)
    return out
