import math

import pytest

from selfcue.config import EngineConfig
from selfcue.engine import Session, SessionState, compose_frame, handle_gap, place_geometry
from selfcue.errors import NonMonotoneTimeError
from selfcue.headpose import pose_matrix
from selfcue.signals import (
    Flash,
    FrameSignal,
    MovementLines,
    Outline,
    OverlayDirective,
    TiltLine,
)
from selfcue.synth import Scenario, generate
from selfcue.wire import serialize_directive

BOX = (0.4, 0.3, 0.2, 0.3)
FPS = 30.0


def frame(t, v=None, a=None, emotions=None, angles=None, box=BOX):
    pose = pose_matrix(*angles) if angles is not None else None
    return FrameSignal(t=t, valence=v, arousal=a, emotions=emotions,
                       pose=pose, face_box=box)


class TestComposeFrame:
    def test_all_absent_frame(self, cfg):
        session = Session(cfg)
        d = session.process(FrameSignal(t=1.0))
        assert d == OverlayDirective(t=1.0)
        assert d.desaturate_background is False

    def test_moment1_transition(self, cfg):
        session = Session(cfg)
        directives = [session.process(f) for f in
                      generate(Scenario("moment1", duration_s=6.0, fps=30.0, seed=42))]
        by_t = {round(d.t, 4): d for d in directives}

        early = by_t[1.0]
        assert early.outline is not None and early.outline.color == "green"
        assert early.icons == ()
        assert early.flash is None

        frown = by_t[3.0]
        assert frown.outline.color == "yellow"
        assert frown.icons == ("vein",)

        negatives = [d.t for prev, d in zip(directives, directives[1:])
                     if d.flash is not None and prev.flash is None
                     and d.flash.polarity == "negative"]
        first_flash = [d.t for d in directives if d.flash is not None]
        assert len(negatives) + (1 if directives[0].flash else 0) == 1
        assert 2.0 < min(first_flash) < 3.0

    def test_nod_scenario(self, cfg):
        session = Session(cfg)
        directives = [session.process(f) for f in
                      generate(Scenario("nod", duration_s=3.0, fps=30.0, seed=7))]
        steady = [d for d in directives if d.t >= 1.0]
        assert all(d.outline is not None and d.outline.color == "green" for d in steady)
        assert all(d.lines is not None and d.lines.nod is not None for d in steady)
        nod_at_1_5 = [d for d in steady if abs(d.t - 1.5) < 1e-9][0]
        assert nod_at_1_5.lines.nod == pytest.approx(0.5, abs=1e-6)
        assert all(d.icons == () for d in directives)
        assert all(d.flash is None for d in directives)
        assert all(d.desaturate_background for d in directives)
        assert all(d.geometry is not None for d in directives)

    def test_non_monotone_rejected(self, cfg):
        session = Session(cfg)
        session.process(FrameSignal(t=1.0))
        with pytest.raises(NonMonotoneTimeError):
            session.process(FrameSignal(t=1.0))

    def test_output_cardinality_and_timestamps(self, cfg):
        session = Session(cfg)
        trace = list(generate(Scenario("mixed", duration_s=5.0, fps=30.0, seed=3)))
        directives = [session.process(f) for f in trace]
        assert len(directives) == len(trace)
        assert [d.t for d in directives] == [f.t for f in trace]

    def test_corrupt_pose_warned_and_skipped(self, cfg):
        session = Session(cfg)
        bad_pose = tuple(v * 1.5 for v in pose_matrix(0, 0, 0))
        d = session.process(FrameSignal(t=0.0, pose=bad_pose, face_box=BOX))
        assert d.lines is None
        assert session.state.warning_counters["pose_invalid"] == 1

    def test_degenerate_frame_lines_only(self, cfg):
        # Face present with VA missing is legal: movement cues still flow.
        session = Session(cfg)
        d = None
        for k in range(45):
            t = k / FPS
            pitch = 10.0 * math.sin(2.0 * math.pi * 2.0 * t)
            d = session.process(frame(t, angles=(pitch, 0.0, 0.0)))
        assert d.outline is None
        assert d.lines is not None and d.lines.nod is not None
        assert d.geometry is not None
        assert d.geometry.outline_ellipse is None
        assert d.geometry.nod_line_segments

    def test_unknown_emotion_counted(self, cfg):
        session = Session(cfg)
        d = session.process(frame(0.0, emotions={"bored": 0.9, "happy": 0.95}))
        assert d.icons == ("sparkle",)
        assert session.state.warning_counters["emotion_unknown_label"] == 1


class TestFaceGap:
    def run_gap(self, cfg, gap_frames, hold_frames=30):
        session = Session(cfg)
        directives = []
        k = 0
        for _ in range(hold_frames):
            directives.append(session.process(frame(k / FPS, v=0.5, a=0.5)))
            k += 1
        for _ in range(gap_frames):
            directives.append(session.process(FrameSignal(t=k / FPS)))
            k += 1
        return session, directives, k

    def test_short_gap_decays_linearly(self, cfg):
        session, directives, _ = self.run_gap(cfg, gap_frames=6)
        base = directives[29].outline.opacity
        held = directives[30:36]
        assert all(d.outline is not None for d in held)
        for i, d in enumerate(held):
            gap = (i + 1) / FPS
            expected = base * (1.0 - gap / cfg.hold_duration_s)
            assert d.outline.opacity == pytest.approx(expected, abs=1e-9)
        assert all(not d.desaturate_background for d in held)
        assert all(d.geometry is None for d in held)

    def test_long_gap_resets_filter(self, cfg):
        session, _, k = self.run_gap(cfg, gap_frames=30)  # 1.0 s gap
        assert not session.state.affect.initialized
        d = session.process(frame(k / FPS, v=-0.9, a=0.1))
        # Fresh initialization: smoothed equals the raw measurement.
        assert session.state.affect.v == -0.9
        assert d.outline.color == "yellow"

    def test_outline_absent_past_hold(self, cfg):
        _, directives, _ = self.run_gap(cfg, gap_frames=30)
        beyond = [d for d in directives[30:] if d.t - directives[29].t > cfg.hold_duration_s]
        assert beyond and all(d.outline is None for d in beyond)

    def test_gap_without_prior_face(self, cfg):
        session = Session(cfg)
        d = session.process(FrameSignal(t=0.0))
        assert d.outline is None

    def test_zero_length_gap_keeps_state(self, cfg):
        session = Session(cfg)
        session.process(frame(0.0, v=0.5, a=0.5))
        state_v = session.state.affect.v
        handle_gap(session.state, 0.0, cfg)
        assert session.state.affect.initialized
        assert session.state.affect.v == state_v

    def test_stream_hole_resets_even_with_face(self, cfg):
        session = Session(cfg)
        session.process(frame(0.0, v=0.5, a=0.5))
        d = session.process(frame(2.0, v=-0.5, a=-0.5))
        assert session.state.affect.v == -0.5  # re-initialized, not filtered
        assert d.outline.color == "red"


class TestPlaceGeometry:
    def test_outline_ellipse_placement(self, cfg):
        d = OverlayDirective(t=0.0, outline=Outline("green", 0.5))
        placed = place_geometry(d, (0.4, 0.3, 0.2, 0.3), cfg)
        cx, cy, rx, ry = placed.outline_ellipse
        assert cx == pytest.approx(0.5, abs=1e-12)
        assert cy == pytest.approx(0.45, abs=1e-12)
        assert rx == pytest.approx(0.11, abs=1e-12)
        assert ry == pytest.approx(0.165, abs=1e-12)

    def test_empty_directive_empty_geometry(self, cfg):
        placed = place_geometry(OverlayDirective(t=0.0), BOX, cfg)
        assert placed.outline_ellipse is None
        assert placed.icon_anchor is None
        assert placed.nod_line_segments == ()
        assert placed.shake_line_segments == ()
        assert placed.tilt_line_segments == ()
        assert placed.flash_rect is None

    def test_icon_anchor_clamped(self, cfg):
        d = OverlayDirective(t=0.0, icons=("sparkle",))
        placed = place_geometry(d, (0.85, 0.1, 0.15, 0.2), cfg)
        x, y = placed.icon_anchor
        assert x <= 1.0
        assert y == pytest.approx(0.08, abs=1e-12)

    def test_icon_anchor_regular(self, cfg):
        d = OverlayDirective(t=0.0, icons=("vein",))
        placed = place_geometry(d, BOX, cfg)
        assert placed.icon_anchor == (pytest.approx(0.62), pytest.approx(0.28))

    def test_nod_band_above_and_below(self, cfg):
        d = OverlayDirective(t=0.0, lines=MovementLines(nod=0.5))
        placed = place_geometry(d, BOX, cfg)
        assert len(placed.nod_line_segments) == 2 * cfg.geometry.line_count
        x, y, w, h = BOX
        eps = 1e-9
        for (x1, y1), (x2, y2) in placed.nod_line_segments:
            assert y1 == y2  # horizontal
            assert (y - cfg.geometry.line_band - eps <= y1 < y) or \
                   (y + h < y1 <= y + h + cfg.geometry.line_band + eps)
            assert x <= x1 < x2 <= x + w

    def test_shake_band_left_and_right(self, cfg):
        d = OverlayDirective(t=0.0, lines=MovementLines(shake=0.5))
        placed = place_geometry(d, BOX, cfg)
        assert len(placed.shake_line_segments) == 2 * cfg.geometry.line_count
        x, y, w, h = BOX
        eps = 1e-9
        for (x1, y1), (x2, y2) in placed.shake_line_segments:
            assert x1 == x2  # vertical
            assert (x - cfg.geometry.line_band - eps <= x1 < x) or \
                   (x + w < x1 <= x + w + cfg.geometry.line_band + eps)

    def test_tilt_rays_on_direction_side(self, cfg):
        x, y, w, h = BOX
        for direction, corner_x, sign in (("left", x, -1.0), ("right", x + w, 1.0)):
            d = OverlayDirective(t=0.0, lines=MovementLines(tilt=TiltLine(0.4, direction)))
            placed = place_geometry(d, BOX, cfg)
            assert len(placed.tilt_line_segments) == cfg.geometry.line_count
            for (x1, y1), (x2, y2) in placed.tilt_line_segments:
                assert sign * (x1 - corner_x) > 0  # off the correct corner
                assert y1 < y and y2 < y1          # rising away from the box
                assert abs(abs(x2 - x1) - abs(y2 - y1)) < 1e-12  # 45 degrees

    def test_flash_rect_full_frame(self, cfg):
        d = OverlayDirective(t=0.0, flash=Flash("negative", 0.5, 0.3))
        placed = place_geometry(d, BOX, cfg)
        assert placed.flash_rect == (0.0, 0.0, 1.0, 1.0)

    def test_all_coordinates_finite(self, cfg):
        d = OverlayDirective(
            t=0.0, outline=Outline("green", 1.0), icons=("vein",),
            lines=MovementLines(nod=1.0, shake=1.0, tilt=TiltLine(1.0, "left")),
            flash=Flash("positive", 0.1, 0.3))
        placed = place_geometry(d, (0.0, 0.0, 1.0, 1.0), cfg)
        coords = list(placed.outline_ellipse) + list(placed.icon_anchor) + list(placed.flash_rect)
        for segs in (placed.nod_line_segments, placed.shake_line_segments,
                     placed.tilt_line_segments):
            for (x1, y1), (x2, y2) in segs:
                coords += [x1, y1, x2, y2]
        assert all(math.isfinite(c) for c in coords)


class TestStreamInvariants:
    def test_determinism_same_trace_same_bytes(self, cfg):
        trace = list(generate(Scenario("mixed", duration_s=8.0, fps=30.0, seed=11)))
        runs = []
        for _ in range(2):
            session = Session(cfg)
            runs.append("\n".join(serialize_directive(session.process(f)) for f in trace))
        assert runs[0] == runs[1]

    def test_privacy_no_raw_labels_in_output(self, cfg):
        banned = ("happy", "sad", "surprise", "anger", "valence", "arousal")
        for kind in ("smile", "frown_burst", "moment1", "mixed"):
            session = Session(cfg)
            for f in generate(Scenario(kind, duration_s=5.0, fps=30.0, seed=2)):
                line = serialize_directive(session.process(f))
                for word in banned:
                    assert word not in line

    def test_flash_duration_bounded(self, cfg):
        session = Session(cfg)
        spans = []
        current = None
        for f in generate(Scenario("moment1", duration_s=8.0, fps=30.0, seed=5)):
            d = session.process(f)
            if d.flash is not None:
                current = (current[0], d.t) if current else (d.t, d.t)
            elif current:
                spans.append(current)
                current = None
        if current:
            spans.append(current)
        assert spans
        for start, end in spans:
            assert end - start <= cfg.shift.flash_duration_s + 1.0 / FPS

    def test_flash_alpha_constant_within_flash(self, cfg):
        session = Session(cfg)
        alphas = {d.flash.alpha
                  for f in generate(Scenario("moment1", duration_s=6.0, fps=30.0, seed=42))
                  if (d := session.process(f)).flash is not None}
        assert alphas == {cfg.shift.flash_alpha}
