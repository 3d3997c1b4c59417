"""Run statistics derived from directive streams."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .signals import ICON_KINDS, OverlayDirective


@dataclass
class RunReport:
    """Aggregate counts over one engine run.

    ``seconds_with`` attributes a frame's inter-frame interval to each cue
    active on it, so values are comparable across frame rates. Fields that
    only the producing run knows (wall time, parse warnings) stay zero when
    a report is recomputed from directives alone.
    """

    frames_in: int = 0
    frames_out: int = 0
    parse_warnings: int = 0
    flash_onsets: dict[str, int] = field(
        default_factory=lambda: {"positive": 0, "negative": 0})
    icon_counts: dict[str, int] = field(
        default_factory=lambda: {k: 0 for k in ICON_KINDS})
    seconds_with: dict[str, float] = field(
        default_factory=lambda: {"outline": 0.0, "nod": 0.0, "shake": 0.0, "tilt": 0.0})
    wall_time_s: float = 0.0
    frames_per_s: float = 0.0

    _prev_t: float | None = field(default=None, repr=False)
    _prev_flash_remaining: float | None = field(default=None, repr=False)

    def observe(self, d: OverlayDirective) -> None:
        """Fold one directive (in stream order) into the counts."""
        self.frames_out += 1
        dt = d.t - self._prev_t if self._prev_t is not None else 0.0

        if d.flash is not None:
            prev = self._prev_flash_remaining
            if prev is None or d.flash.remaining > prev:
                self.flash_onsets[d.flash.polarity] += 1
            self._prev_flash_remaining = d.flash.remaining
        else:
            self._prev_flash_remaining = None

        for kind in d.icons:
            self.icon_counts[kind] += 1

        if d.outline is not None:
            self.seconds_with["outline"] += dt
        if d.lines is not None:
            if d.lines.nod is not None:
                self.seconds_with["nod"] += dt
            if d.lines.shake is not None:
                self.seconds_with["shake"] += dt
            if d.lines.tilt is not None:
                self.seconds_with["tilt"] += dt

        self._prev_t = d.t

    def to_dict(self) -> dict:
        return {
            "frames_in": self.frames_in,
            "frames_out": self.frames_out,
            "parse_warnings": self.parse_warnings,
            "flash_onsets": dict(self.flash_onsets),
            "icon_counts": dict(self.icon_counts),
            "seconds_with": {k: round(v, 6) for k, v in self.seconds_with.items()},
            "wall_time_s": round(self.wall_time_s, 6),
            "frames_per_s": round(self.frames_per_s, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def report_from_directives(directives: Iterable[OverlayDirective]) -> RunReport:
    """Recompute the directive-derivable report fields from a stream."""
    report = RunReport()
    for d in directives:
        report.frames_in += 1
        report.observe(d)
    return report


@dataclass(frozen=True, slots=True)
class CueEvent:
    """Onset of a rendered cue, extracted from a directive stream."""

    t: float
    kind: str


def extract_events(directives: Iterable[OverlayDirective]) -> Iterator[CueEvent]:
    """Yield cue onsets (flash_*, icon_*, nod, shake, tilt) in stream order.

    An onset is a frame where the cue is present and was absent on the
    previous frame (flash onsets also fire when ``remaining`` jumps upward,
    covering back-to-back flashes under tight configs).
    """
    prev_icons: tuple[str, ...] = ()
    prev_nod = prev_shake = prev_tilt = False
    prev_flash_remaining: float | None = None

    for d in directives:
        if d.flash is not None:
            if prev_flash_remaining is None or d.flash.remaining > prev_flash_remaining:
                yield CueEvent(d.t, f"flash_{d.flash.polarity}")
            prev_flash_remaining = d.flash.remaining
        else:
            prev_flash_remaining = None

        for kind in d.icons:
            if kind not in prev_icons:
                yield CueEvent(d.t, f"icon_{kind}")
        prev_icons = d.icons

        nod = d.lines is not None and d.lines.nod is not None
        shake = d.lines is not None and d.lines.shake is not None
        tilt = d.lines is not None and d.lines.tilt is not None
        if nod and not prev_nod:
            yield CueEvent(d.t, "nod")
        if shake and not prev_shake:
            yield CueEvent(d.t, "shake")
        if tilt and not prev_tilt:
            yield CueEvent(d.t, "tilt")
        prev_nod, prev_shake, prev_tilt = nod, shake, tilt
