"""The live self-view app: capture, detect, interpret (via the engine), render.

Pipeline per frame: a source yields a BGR image (or a recorded frame line),
the detector backend turns it into wire signals, the engine subprocess
returns an overlay directive, and the renderer composites it over the
mirrored frame. Everything interpretive happens in the engine; this process
only senses and draws, and it never sends video or signals anywhere but the
local engine pipe.

Camera mode runs capture on a helper thread with a newest-wins mailbox so a
slow frame cannot back up the device; frames are never reordered once sent.
Replay (--trace) and synthetic modes stay strictly sequential so runs are
reproducible.
"""

from __future__ import annotations

import argparse
import json
import queue
import sys
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path

import cv2
import numpy as np

from .backends import DetectorSample, resolve_backend
from .engine_client import EngineClient, EngineDied
from .facegen import blank_frame
from .render import render_directive
from .sources import CameraSource, SyntheticSource, TraceSource
from .wire import WireError, frame_line, validate_frame_line


@dataclass
class SessionStats:
    frames: int = 0
    rendered: int = 0
    dropped: int = 0
    wall_time_s: float = 0.0
    notices: list[str] = field(default_factory=list)

    @property
    def fps(self) -> float:
        return self.frames / self.wall_time_s if self.wall_time_s > 0 else 0.0

    def to_json(self) -> str:
        return json.dumps({"frames": self.frames, "rendered": self.rendered,
                           "dropped": self.dropped,
                           "wall_time_s": round(self.wall_time_s, 3),
                           "fps": round(self.fps, 2),
                           "notices": self.notices})


class _Recorder:
    def __init__(self, path: str | None):
        self._handle = open(path, "w", encoding="utf-8") if path else None

    def write(self, line: str) -> None:
        if self._handle is not None:
            self._handle.write(line + "\n")

    def close(self) -> None:
        if self._handle is not None:
            self._handle.close()


class _Mailbox:
    """Size-1 latest-frame handoff; the producer overwrites, never blocks."""

    def __init__(self):
        self._q: queue.Queue = queue.Queue(maxsize=1)
        self.dropped = 0

    def put(self, item) -> None:
        while True:
            try:
                self._q.put_nowait(item)
                return
            except queue.Full:
                try:
                    self._q.get_nowait()
                    self.dropped += 1
                except queue.Empty:
                    pass

    def get(self, timeout: float):
        return self._q.get(timeout=timeout)


def _windowed_imshow_available() -> bool:
    try:  # headless OpenCV builds raise on first use, not at import
        cv2.namedWindow("__probe__", cv2.WINDOW_NORMAL)
        cv2.destroyWindow("__probe__")
        return True
    except cv2.error:
        return False


def _sample_to_line(t: float, sample: DetectorSample) -> str:
    return frame_line(t, valence=sample.valence, arousal=sample.arousal,
                      emotions=sample.emotions, pose=sample.pose,
                      face_box=sample.face_box)


def run_app(args: argparse.Namespace) -> SessionStats:
    stats = SessionStats()
    backend, notice = resolve_backend(args.backend)
    if notice:
        stats.notices.append(notice)
        print(f"selfview: {notice}", file=sys.stderr)

    windowed = not args.headless and _windowed_imshow_available()
    if not args.headless and not windowed:
        stats.notices.append("no display available; running headless")
        print("selfview: no display available; running headless", file=sys.stderr)

    keyframe_dir = Path(args.keyframes) if args.keyframes else None
    if keyframe_dir:
        keyframe_dir.mkdir(parents=True, exist_ok=True)
    keyframe_times = sorted(float(v) for v in args.keyframe_times.split(",")) \
        if args.keyframe_times else []
    next_keyframe = 0

    record = _Recorder(args.record)
    record_directives = _Recorder(args.record_directives)
    debug = False
    show_raw = False
    started = time.perf_counter()

    try:
        with EngineClient(args.engine, args.config) as engine:
            if args.trace:
                feed = _replay_feed(args.trace)
            elif args.synthetic:
                feed = _detect_feed(
                    SyntheticSource(fps=args.fps, duration_s=args.duration,
                                    realtime=windowed),
                    backend, stats)
            else:
                feed = _camera_feed(CameraSource(args.camera), backend, stats,
                                    args.duration)

            for t, line, frame, mask in feed:
                record.write(line)
                directive = engine.process_line(line)
                record_directives.write(directive.raw)
                stats.frames += 1

                canvas = frame if frame is not None else blank_frame()
                if show_raw:
                    rendered = cv2.flip(canvas, 1) if args.mirror else canvas
                else:
                    rendered = render_directive(canvas, directive, mask,
                                                mirrored=args.mirror, debug=debug)
                stats.rendered += 1

                while (next_keyframe < len(keyframe_times)
                       and t >= keyframe_times[next_keyframe] - 1e-9):
                    assert keyframe_dir is not None
                    cv2.imwrite(str(keyframe_dir / f"key_{keyframe_times[next_keyframe]:.2f}.png"),
                                rendered)
                    next_keyframe += 1

                if windowed:
                    cv2.imshow("selfview", rendered)
                    key = cv2.waitKey(1) & 0xFF
                    if key == ord("q"):
                        break
                    if key == ord("d"):
                        debug = not debug
                    if key == ord("r"):
                        show_raw = not show_raw
    except EngineDied as exc:
        print(f"selfview: {exc}", file=sys.stderr)
        raise
    finally:
        record.close()
        record_directives.close()
        if windowed:
            cv2.destroyAllWindows()
        stats.wall_time_s = time.perf_counter() - started
    return stats


def _replay_feed(path: str):
    """Recorded frame lines; validated, rendered over a neutral canvas."""
    for t, line in TraceSource(path).lines():
        try:
            validate_frame_line(line)
        except WireError as exc:
            print(f"selfview: skipping invalid trace line: {exc}", file=sys.stderr)
            continue
        yield t, line, None, None


def _detect_feed(source, backend, stats: SessionStats):
    last_t = -1.0
    try:
        for t, frame in source.frames():
            if t <= last_t:
                continue
            sample = backend.analyze(frame)
            try:
                line = _sample_to_line(t, sample)
            except WireError as exc:
                print(f"selfview: dropping frame ({exc})", file=sys.stderr)
                continue
            last_t = t
            yield t, line, frame, sample.mask
    finally:
        source.close()


def _camera_feed(source: CameraSource, backend, stats: SessionStats,
                 duration_s: float | None):
    """Capture on a thread; detect+send on the caller. Newest frame wins."""
    mailbox = _Mailbox()
    stop = threading.Event()

    def capture() -> None:
        try:
            for item in source.frames():
                if stop.is_set():
                    return
                mailbox.put(item)
        finally:
            mailbox.put(None)

    thread = threading.Thread(target=capture, name="capture", daemon=True)
    thread.start()
    last_t = -1.0
    deadline = time.monotonic() + duration_s if duration_s else None
    try:
        while deadline is None or time.monotonic() < deadline:
            try:
                item = mailbox.get(timeout=2.0)
            except queue.Empty:
                break
            if item is None:
                break
            t, frame = item
            if t <= last_t:
                continue
            sample = backend.analyze(frame)
            try:
                line = _sample_to_line(t, sample)
            except WireError as exc:
                print(f"selfview: dropping frame ({exc})", file=sys.stderr)
                continue
            last_t = t
            yield t, line, frame, sample.mask
    finally:
        stop.set()
        source.close()
        stats.dropped = mailbox.dropped


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfview",
        description="Mirrored self-view window with private expression overlays.")
    src = parser.add_mutually_exclusive_group()
    src.add_argument("--camera", type=int, default=0, help="camera index (default 0)")
    src.add_argument("--trace", default=None,
                     help="replay a recorded frame JSONL instead of the camera")
    src.add_argument("--synthetic", action="store_true",
                     help="use the built-in animated face instead of a camera")
    parser.add_argument("--engine", default=None,
                        help="engine command (default: current Python's selfcue)")
    parser.add_argument("--config", default=None, help="engine config JSON")
    parser.add_argument("--backend", choices=("auto", "stub", "real"), default="auto")
    parser.add_argument("--record", default=None,
                        help="tee outgoing frame JSONL here for later replay")
    parser.add_argument("--record-directives", default=None,
                        help="tee incoming directive JSONL here")
    parser.add_argument("--headless", action="store_true",
                        help="never open a window (keyframes/records still written)")
    parser.add_argument("--keyframes", default=None,
                        help="directory for rendered keyframe PNGs")
    parser.add_argument("--keyframe-times", default=None,
                        help="comma-separated seconds at which to save keyframes")
    parser.add_argument("--duration", type=float, default=None,
                        help="stop after this many seconds of input")
    parser.add_argument("--fps", type=float, default=30.0,
                        help="synthetic source frame rate")
    parser.add_argument("--mirror", action=argparse.BooleanOptionalAction, default=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        stats = run_app(args)
    except EngineDied:
        return 2
    except Exception as exc:  # camera/source failures: diagnostic, not traceback
        print(f"selfview: {exc}", file=sys.stderr)
        return 2
    print(stats.to_json(), file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
