import math
import random
import statistics

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from selfcue.affect import (
    AffectState,
    kalman_step,
    outline_opacity,
    quadrant_color,
    shift_detect,
)
from selfcue.config import EngineConfig, KalmanConfig, ShiftConfig
from selfcue.errors import NonMonotoneTimeError

from oracles import ScalarFilterSim, simulate_shift_onsets, steady_state_gain

FPS = 30.0


def run_filter(values, cfg):
    state = AffectState()
    out = []
    for i, z in enumerate(values):
        v, _ = kalman_step(state, (z, 0.0), i / FPS, cfg)
        out.append(v)
    return state, out


class TestKalman:
    def test_first_measurement_passthrough(self, cfg):
        state = AffectState()
        v, a = kalman_step(state, (0.5, -0.2), 0.0, cfg)
        assert (v, a) == (0.5, -0.2)
        assert state.pv == cfg.kalman.p0

    def test_constant_input_fixed_point(self, cfg):
        _, out = run_filter([0.8] * 100, cfg)
        errors = [abs(v - 0.8) for v in out]
        assert errors[-1] < 1e-6
        assert all(e2 <= e1 + 1e-15 for e1, e2 in zip(errors, errors[1:]))

    def test_step_response_matches_simulation(self, cfg):
        # Settle at 0, then drive with 1.0 for 30 steps.
        values = [0.0] * 600 + [1.0] * 30
        _, out = run_filter(values, cfg)
        sim = ScalarFilterSim(cfg.kalman.q, cfg.kalman.r, cfg.kalman.p0)
        expected = [sim.step(z) for z in values]
        assert out[-1] == pytest.approx(expected[-1], abs=1e-12)
        assert out[-1] >= 0.98

    def test_steady_state_gain_closed_form(self, cfg):
        # After settling, the one-step gain equals the closed-form k*.
        state, _ = run_filter([0.0] * 2000, cfg)
        q, r = cfg.kalman.q, cfg.kalman.r
        p = state.pv + q
        assert p / (p + r) == pytest.approx(steady_state_gain(q, r), rel=1e-9)

    def test_non_monotone_time_rejected(self, cfg):
        state = AffectState()
        kalman_step(state, (0.0, 0.0), 1.0, cfg)
        with pytest.raises(NonMonotoneTimeError):
            kalman_step(state, (0.0, 0.0), 1.0, cfg)
        with pytest.raises(NonMonotoneTimeError):
            kalman_step(state, (0.0, 0.0), 0.5, cfg)

    def test_noise_reduction(self, cfg):
        rng = random.Random(1234)
        raw = [max(-1.0, min(1.0, 0.1 + rng.gauss(0.0, 0.2))) for _ in range(1000)]
        _, smoothed = run_filter(raw, cfg)
        assert statistics.pvariance(smoothed) < statistics.pvariance(raw)

    @settings(max_examples=200)
    @given(st.lists(st.floats(-1.0, 1.0), min_size=1, max_size=50))
    def test_convex_combination_property(self, values):
        _, out = run_filter(values, EngineConfig())
        lo, hi = min(values), max(values)
        for v in out:
            assert lo - 1e-12 <= v <= hi + 1e-12


class TestQuadrantColor:
    @pytest.mark.parametrize("v,a,color", [
        (0.6, 0.4, "green"),
        (-0.3, 0.5, "yellow"),
        (-0.2, -0.2, "red"),
        (0.5, -0.5, "blue"),
        (0.0, 0.0, "green"),
        (0.0, -1e-9, "blue"),
        (-1e-9, 0.0, "yellow"),
        (-1e-9, -1e-9, "red"),
    ])
    def test_table(self, v, a, color):
        assert quadrant_color(v, a) == color

    @settings(max_examples=200)
    @given(
        v=st.floats(-1.0, 1.0),
        a=st.floats(-1.0, 1.0),
        c=st.floats(1e-6, 1e3),
    )
    def test_positive_scaling_invariance(self, v, a, c):
        assert quadrant_color(c * v, c * a) == quadrant_color(v, a)


class TestOutlineOpacity:
    def test_origin(self):
        assert outline_opacity(0.0, 0.0) == 0.0

    def test_corner_clamps(self):
        assert outline_opacity(1.0, 1.0) == 1.0
        assert outline_opacity(-1.0, 1.0) == 1.0

    def test_hand_computed(self):
        assert outline_opacity(0.3, 0.4) == pytest.approx(0.5 / math.sqrt(2), abs=1e-12)

    @settings(max_examples=200)
    @given(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5),
           st.floats(-1.5, 1.5), st.floats(-1.5, 1.5))
    def test_monotone_in_distance(self, v1, a1, v2, a2):
        d1 = math.hypot(v1, a1)
        d2 = math.hypot(v2, a2)
        o1, o2 = outline_opacity(v1, a1), outline_opacity(v2, a2)
        if d1 <= d2:
            assert o1 <= o2 + 1e-12
        if d1 >= math.sqrt(2):
            assert o1 == 1.0


def feed(state, samples, cfg):
    """Drive kalman + shift pipeline over (t, v_raw) samples, collect onsets."""
    onsets = []
    for t, z in samples:
        v, _ = kalman_step(state, (z, 0.0), t, cfg)
        onset = shift_detect(state, t, v, cfg)
        if onset is not None:
            onsets.append((t, onset.polarity))
    return onsets


class TestShiftDetect:
    def test_constant_valence_never_fires(self, cfg):
        samples = [(k / FPS, 0.4) for k in range(int(5 * FPS))]
        assert feed(AffectState(), samples, cfg) == []

    def test_step_fires_once_in_window(self, cfg):
        samples = [(k / FPS, 0.5 if k / FPS < 3.0 else -0.5)
                   for k in range(int(8 * FPS))]
        onsets = feed(AffectState(), samples, cfg)
        expected = simulate_shift_onsets(samples)
        assert onsets == expected
        assert len(onsets) == 1
        t, polarity = onsets[0]
        assert polarity == "negative"
        assert 3.0 < t <= 4.2

    def test_slow_drift_never_fires(self, cfg):
        samples = [(k / FPS, max(-1.0, 0.5 - 0.0005 * k))
                   for k in range(int(30 * FPS))]
        assert feed(AffectState(), samples, cfg) == []

    def test_positive_shift_polarity(self, cfg):
        samples = [(k / FPS, -0.5 if k / FPS < 3.0 else 0.5)
                   for k in range(int(6 * FPS))]
        onsets = feed(AffectState(), samples, cfg)
        assert len(onsets) == 1
        assert onsets[0][1] == "positive"

    def test_refractory_suppresses_back_to_back(self):
        cfg = EngineConfig(shift=ShiftConfig(delta=0.2, flash_refractory_s=2.0))
        # Square wave swinging well past the low delta every second.
        samples = [(k / FPS, 0.5 if (k // 30) % 2 == 0 else -0.5)
                   for k in range(int(10 * FPS))]
        onsets = feed(AffectState(), samples, cfg)
        assert len(onsets) >= 2
        for (t1, _), (t2, _) in zip(onsets, onsets[1:]):
            assert t2 - t1 >= cfg.shift.flash_refractory_s - 1e-9

    def test_no_baseline_no_onset(self, cfg):
        # A hard step inside the first window cannot fire: nothing is old enough.
        samples = [(k / FPS, 0.9 if k < 5 else -0.9) for k in range(20)]
        assert feed(AffectState(), samples, cfg) == []

    def test_flash_bookkeeping(self, cfg):
        state = AffectState()
        samples = [(k / FPS, 0.5 if k / FPS < 3.0 else -0.5)
                   for k in range(int(5 * FPS))]
        feed(state, samples, cfg)
        assert state.flash_polarity == "negative"
        assert state.flash_active_until is not None
        assert state.flash_active_until <= state.refractory_until

    def test_history_pruned_to_double_window(self, cfg):
        state = AffectState()
        samples = [(k / FPS, 0.0) for k in range(int(60 * FPS))]
        feed(state, samples, cfg)
        oldest_age = samples[-1][0] - state.history[0][0]
        assert oldest_age <= 2.0 * cfg.shift.window_s + 1.0 / FPS
