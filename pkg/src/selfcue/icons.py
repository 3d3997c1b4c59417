"""Categorical-emotion icon gate."""

from __future__ import annotations

from typing import Mapping

from .config import EngineConfig

ICON_FOR_LABEL = {
    "happy": "sparkle",
    "sad": "droplet",
    "surprise": "exclamation",
    "anger": "vein",
}

# Fixed tie-break priority; iteration never touches the input map's order.
_PRIORITY = ("happy", "sad", "surprise", "anger")


def select_icon(emotions: Mapping[str, float], cfg: EngineConfig) -> str | None:
    """Pick the icon for the strongest gated emotion, if any.

    Only confidences strictly above ``cfg.icon_confidence`` qualify; the
    maximum wins and ties resolve happy > sad > surprise > anger. ``neutral``
    and unknown labels never yield an icon.
    """
    best: str | None = None
    best_c = cfg.icon_confidence
    for label in _PRIORITY:
        c = emotions.get(label)
        if c is not None and c > best_c:
            best = label
            best_c = c
    return ICON_FOR_LABEL[best] if best is not None else None
