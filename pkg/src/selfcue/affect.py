"""Valence/arousal smoothing, quadrant color mapping, and shift detection.

Two independent scalar constant-position Kalman filters (state transition
F=1, observation H=1) smooth the raw valence/arousal stream so the outline
color does not flicker with per-frame detector noise. A separate detector
compares the smoothed valence against a ~1 s-old baseline and raises a
brief flash event on large swings, with a refractory period so flashes
cannot stack.

An AffectState belongs to exactly one session and is updated sequentially;
distinct sessions may run on different threads.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .config import EngineConfig
from .errors import NonMonotoneTimeError

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True, slots=True)
class FlashOnset:
    polarity: str  # "positive" | "negative"


class AffectState:
    """Filter state plus shift-detector history for one session.

    Attributes:
        v, a: smoothed valence/arousal (valid once ``initialized``).
        pv, pa: per-axis error variance, always > 0 once initialized.
        last_update_t: time of the last measurement, or None.
        history: (t, smoothed valence) samples spanning twice the shift
            window, timestamps strictly increasing.
        flash_active_until / flash_polarity: the currently running flash.
        refractory_until: no new flash may begin before this time.
    """

    __slots__ = ("v", "a", "pv", "pa", "last_update_t", "history",
                 "flash_active_until", "flash_polarity", "refractory_until")

    def __init__(self) -> None:
        self.v = 0.0
        self.a = 0.0
        self.pv = 0.0
        self.pa = 0.0
        self.last_update_t: float | None = None
        self.history: deque[tuple[float, float]] = deque()
        self.flash_active_until: float | None = None
        self.flash_polarity: str | None = None
        self.refractory_until = -math.inf

    @property
    def initialized(self) -> bool:
        return self.last_update_t is not None


def kalman_step(state: AffectState, z: tuple[float, float], t: float,
                cfg: EngineConfig) -> tuple[float, float]:
    """Advance the filter with measurement ``z`` at time ``t``.

    The first-ever measurement initializes the state to ``z`` exactly with
    variance p0; afterwards each axis runs the scalar update
    p += q; k = p/(p+r); x += k*(z-x); p = (1-k)*p.

    Mutates ``state`` and returns the smoothed (valence, arousal) pair.

    Raises:
        NonMonotoneTimeError: ``t`` does not advance past the last update.
    """
    last = state.last_update_t
    if last is not None and t <= last:
        raise NonMonotoneTimeError(f"t={t} does not advance past {last}")
    k = cfg.kalman
    if last is None:
        state.v, state.a = z
        state.pv = k.p0
        state.pa = k.p0
    else:
        q, r = k.q, k.r
        p = state.pv + q
        g = p / (p + r)
        state.v += g * (z[0] - state.v)
        state.pv = (1.0 - g) * p
        p = state.pa + q
        g = p / (p + r)
        state.a += g * (z[1] - state.a)
        state.pa = (1.0 - g) * p
    state.last_update_t = t
    return state.v, state.a


def quadrant_color(v: float, a: float) -> str:
    """Map smoothed (valence, arousal) to the outline color quadrant.

    Boundaries are closed on the positive side; at the origin the opacity is
    zero, so the choice there is invisible.
    """
    if v >= 0.0:
        return "green" if a >= 0.0 else "blue"
    return "yellow" if a >= 0.0 else "red"


def outline_opacity(v: float, a: float) -> float:
    """Outline opacity: distance from the affect origin, normalized by sqrt(2)."""
    d = math.sqrt(v * v + a * a) / SQRT2
    return d if d < 1.0 else 1.0


def shift_detect(state: AffectState, t: float, smoothed_v: float,
                 cfg: EngineConfig) -> FlashOnset | None:
    """Record ``smoothed_v`` and report a flash onset when valence swung hard.

    The baseline is the history sample closest to ``t - window`` whose age
    lies in [window, 2*window]; with no such sample (young streams, fresh
    resets) no onset can fire. A swing of at least ``delta`` in either
    direction triggers an onset unless the refractory period is running.

    Mutates ``state`` (history push/prune, flash bookkeeping).
    """
    s = cfg.shift
    w = s.window_s
    baseline: float | None = None
    # Newest sample at least `w` old is the one closest to t - w.
    for ts, vs in reversed(state.history):
        age = t - ts
        if age < w:
            continue
        if age <= 2.0 * w:
            baseline = vs
        break

    onset: FlashOnset | None = None
    if baseline is not None and t >= state.refractory_until:
        delta = smoothed_v - baseline
        if delta <= -s.delta:
            onset = FlashOnset("negative")
        elif delta >= s.delta:
            onset = FlashOnset("positive")
        if onset is not None:
            state.flash_active_until = t + s.flash_duration_s
            state.flash_polarity = onset.polarity
            state.refractory_until = t + s.flash_refractory_s

    history = state.history
    history.append((t, smoothed_v))
    horizon = t - 2.0 * w
    while history[0][0] < horizon:
        history.popleft()
    return onset
