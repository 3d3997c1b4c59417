"""Sliding-window head-movement detection.

A MovementWindow keeps the Euler-angle samples of the last ``window_s``
seconds together with centered running sums, giving O(1) mean and variance
per frame. Nod and shake trigger on pitch/yaw variance over the window;
tilt triggers on the mean roll angle. Opacity grows with the statistic and
saturates at a configurable ceiling.
"""

from __future__ import annotations

from collections import deque

from .config import EngineConfig
from .errors import NonMonotoneTimeError
from .signals import EulerAngles, MovementLines, TiltLine

# Running sums are rebuilt from the buffer at this cadence so float noise
# from long add/evict sequences cannot accumulate past the 1e-9 contract.
_REBUILD_EVERY = 4096


class MovementWindow:
    """Ring buffer of (t, pitch, yaw, roll) with incremental statistics.

    Sums are centered on the first sample seen after each empty state;
    angles are bounded by [-180, 180], so deviations from any in-range
    center stay small enough to avoid catastrophic cancellation.
    """

    __slots__ = ("samples", "_center", "_sum", "_sumsq", "_pushes")

    def __init__(self) -> None:
        self.samples: deque[tuple[float, float, float, float]] = deque()
        self._center = (0.0, 0.0, 0.0)
        self._sum = [0.0, 0.0, 0.0]
        self._sumsq = [0.0, 0.0, 0.0]
        self._pushes = 0

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def span(self) -> float:
        """Time covered by the buffered samples."""
        if len(self.samples) < 2:
            return 0.0
        return self.samples[-1][0] - self.samples[0][0]

    def push(self, t: float, angles: EulerAngles, cfg: EngineConfig) -> None:
        """Append a sample and evict everything older than the window.

        Raises:
            NonMonotoneTimeError: ``t`` does not advance past the last sample.
        """
        samples = self.samples
        if samples:
            if t <= samples[-1][0]:
                raise NonMonotoneTimeError(f"t={t} does not advance past {samples[-1][0]}")
        else:
            self._center = (angles.pitch, angles.yaw, angles.roll)
            self._sum = [0.0, 0.0, 0.0]
            self._sumsq = [0.0, 0.0, 0.0]

        cp, cy, cr = self._center
        s, s2 = self._sum, self._sumsq
        dp = angles.pitch - cp
        dy = angles.yaw - cy
        dr = angles.roll - cr
        s[0] += dp
        s[1] += dy
        s[2] += dr
        s2[0] += dp * dp
        s2[1] += dy * dy
        s2[2] += dr * dr
        samples.append((t, angles.pitch, angles.yaw, angles.roll))

        horizon = t - cfg.movement.window_s
        while samples[0][0] <= horizon:
            _, p, y, r = samples.popleft()
            dp = p - cp
            dy = y - cy
            dr = r - cr
            s[0] -= dp
            s[1] -= dy
            s[2] -= dr
            s2[0] -= dp * dp
            s2[1] -= dy * dy
            s2[2] -= dr * dr

        self._pushes += 1
        if self._pushes % _REBUILD_EVERY == 0:
            self._rebuild()

    def _rebuild(self) -> None:
        samples = self.samples
        if not samples:
            return
        _, cp, cy, cr = samples[0]
        self._center = (cp, cy, cr)
        s = [0.0, 0.0, 0.0]
        s2 = [0.0, 0.0, 0.0]
        for _, p, y, r in samples:
            dp = p - cp
            dy = y - cy
            dr = r - cr
            s[0] += dp
            s[1] += dy
            s[2] += dr
            s2[0] += dp * dp
            s2[1] += dy * dy
            s2[2] += dr * dr
        self._sum = s
        self._sumsq = s2

    def mean(self, axis: int) -> float:
        """Mean angle over the window; axis 0=pitch, 1=yaw, 2=roll."""
        n = len(self.samples)
        if n == 0:
            return 0.0
        return self._center[axis] + self._sum[axis] / n

    def variance(self, axis: int) -> float:
        """Population variance over the window (deg^2)."""
        n = len(self.samples)
        if n == 0:
            return 0.0
        m = self._sum[axis] / n
        var = self._sumsq[axis] / n - m * m
        return var if var > 0.0 else 0.0


def detect_movements(window: MovementWindow, cfg: EngineConfig) -> MovementLines:
    """Evaluate nod/shake/tilt cues from the current window contents.

    All cues stay absent until the buffer covers at least
    ``min_fill * window_s`` seconds, so a freshly (re)started stream cannot
    fire on a handful of samples.
    """
    m = cfg.movement
    if window.span < m.min_fill * m.window_s:
        return MovementLines()

    nod = shake = None
    tilt = None

    var_pitch = window.variance(0)
    if var_pitch > m.nod_var:
        nod = min(1.0, var_pitch / m.var_opacity_max)
    var_yaw = window.variance(1)
    if var_yaw > m.shake_var:
        shake = min(1.0, var_yaw / m.var_opacity_max)
    mean_roll = window.mean(2)
    if abs(mean_roll) > m.tilt_deg:
        tilt = TiltLine(
            opacity=min(1.0, abs(mean_roll) / m.tilt_opacity_max_deg),
            direction="left" if mean_roll > 0 else "right",
        )
    return MovementLines(nod=nod, shake=shake, tilt=tilt)
