"""Command-line surface: batch runs, live streaming, synthesis, stats, bench.

Directives go to stdout (or --output); every diagnostic goes to stderr, so
stream mode can be piped safely. Exit codes: 0 success (possibly with
recoverable warnings), 2 fatal I/O or configuration error.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from pathlib import Path
from typing import IO, Iterator

from .config import EngineConfig, load_config
from .engine import Session
from .errors import ConfigError, EngineError, NonMonotoneTimeError, ParseError
from .report import RunReport, report_from_directives
from .synth import Scenario, annotations, frame_count, generate
from .wire import (
    parse_directive,
    parse_frame,
    serialize_annotation,
    serialize_directive,
    serialize_frame,
)


def _open_in(path: str) -> IO[str]:
    if path == "-":
        return sys.stdin
    return open(path, "r", encoding="utf-8")


def _open_out(path: str) -> IO[str]:
    if path == "-":
        return sys.stdout
    return open(path, "w", encoding="utf-8")


def _close(handle: IO[str]) -> None:
    if handle not in (sys.stdin, sys.stdout):
        handle.close()


def _load_config_or_die(path: str | None) -> EngineConfig:
    return load_config(path)


def _process_stream(lines: Iterator[str], out: IO[str], cfg: EngineConfig,
                    flush_each: bool) -> RunReport:
    """Shared core of run and stream: parse, compose, serialize per line."""
    session = Session(cfg)
    report = RunReport()
    warnings: dict[str, int] = {}
    started = time.perf_counter()
    for line in lines:
        if not line.strip():
            continue
        report.frames_in += 1
        try:
            sig = parse_frame(line, warnings)
        except ParseError as exc:
            report.parse_warnings += 1
            print(f"selfcue: skipping malformed frame: {exc}", file=sys.stderr)
            continue
        try:
            directive = session.process(sig)
        except NonMonotoneTimeError as exc:
            report.parse_warnings += 1
            print(f"selfcue: skipping out-of-order frame: {exc}", file=sys.stderr)
            continue
        report.observe(directive)
        out.write(serialize_directive(directive))
        out.write("\n")
        if flush_each:
            out.flush()
    report.parse_warnings += sum(warnings.values())
    report.wall_time_s = time.perf_counter() - started
    if report.wall_time_s > 0:
        report.frames_per_s = report.frames_out / report.wall_time_s
    return report


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _load_config_or_die(args.config)
    try:
        src = _open_in(args.input)
    except OSError as exc:
        print(f"selfcue: cannot open input: {exc}", file=sys.stderr)
        return 2
    try:
        dst = _open_out(args.output)
    except OSError as exc:
        _close(src)
        print(f"selfcue: cannot open output: {exc}", file=sys.stderr)
        return 2
    try:
        report = _process_stream(iter(src), dst, cfg, flush_each=False)
    finally:
        _close(src)
        _close(dst)
    if args.report:
        Path(args.report).write_text(report.to_json() + "\n", encoding="utf-8")
    else:
        print(report.to_json(), file=sys.stderr)
    return 0


def cmd_stream(args: argparse.Namespace) -> int:
    cfg = _load_config_or_die(args.config)
    lines = iter(sys.stdin.readline, "")
    report = _process_stream(lines, sys.stdout, cfg, flush_each=True)
    print(report.to_json(), file=sys.stderr)
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    sc = Scenario(kind=args.scenario, duration_s=args.duration, fps=args.fps,
                  seed=args.seed, noise_std=args.noise_std)
    try:
        dst = _open_out(args.output)
    except OSError as exc:
        print(f"selfcue: cannot open output: {exc}", file=sys.stderr)
        return 2
    try:
        for frame in generate(sc):
            dst.write(serialize_frame(frame))
            dst.write("\n")
    finally:
        _close(dst)

    annot_path = args.annotations
    if annot_path is None and args.output != "-":
        annot_path = str(Path(args.output).with_suffix("")) + ".annotations.jsonl"
    if annot_path:
        with open(annot_path, "w", encoding="utf-8") as handle:
            for annotation in annotations(sc):
                handle.write(serialize_annotation(annotation))
                handle.write("\n")
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        src = _open_in(args.input)
    except OSError as exc:
        print(f"selfcue: cannot open input: {exc}", file=sys.stderr)
        return 2

    def directives() -> Iterator:
        for line in src:
            if not line.strip():
                continue
            try:
                yield parse_directive(line)
            except ParseError as exc:
                print(f"selfcue: skipping malformed directive: {exc}", file=sys.stderr)

    try:
        report = report_from_directives(directives())
    finally:
        _close(src)
    print(report.to_json())
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    cfg = _load_config_or_die(args.config)
    n = args.frames
    checksum = hashlib.sha256()
    timings: list[float] = []
    if n > 0:
        sc = Scenario(kind="mixed", duration_s=n / args.fps, fps=args.fps,
                      seed=args.seed)
        session = Session(cfg)
        perf = time.perf_counter
        for frame in generate(sc):
            t0 = perf()
            directive = session.process(frame)
            timings.append(perf() - t0)
            checksum.update(serialize_directive(directive).encode())
            checksum.update(b"\n")
    engine_s = sum(timings)
    timings.sort()
    result = {
        "frames": len(timings),
        "engine_seconds": round(engine_s, 6),
        "frames_per_s": round(len(timings) / engine_s, 1) if engine_s > 0 else 0.0,
        "p50_us": round(timings[len(timings) // 2] * 1e6, 2) if timings else 0.0,
        "p99_us": round(timings[int(len(timings) * 0.99)] * 1e6, 2) if timings else 0.0,
        "checksum": checksum.hexdigest(),
    }
    import json
    print(json.dumps(result))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfcue",
        description="Turn facial-signal JSONL streams into self-view overlay directives.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="batch-process a trace file")
    p.add_argument("--input", required=True, help="frame JSONL path, or - for stdin")
    p.add_argument("--output", required=True, help="directive JSONL path, or - for stdout")
    p.add_argument("--config", default=None, help="engine config JSON path")
    p.add_argument("--report", default=None, help="write the run report here instead of stderr")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("stream", help="process stdin to stdout, one line at a time")
    p.add_argument("--config", default=None)
    p.set_defaults(handler=cmd_stream)

    p = sub.add_parser("synth", help="generate a synthetic trace with annotations")
    p.add_argument("--scenario", required=True,
                   choices=("neutral", "smile", "frown_burst", "nod", "shake",
                            "tilt", "moment1", "moment2", "mixed"))
    p.add_argument("--duration", type=float, default=6.0, help="seconds")
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise-std", type=float, default=0.05)
    p.add_argument("--output", required=True, help="trace JSONL path, or - for stdout")
    p.add_argument("--annotations", default=None,
                   help="annotation JSONL path (default: sibling of --output)")
    p.set_defaults(handler=cmd_synth)

    p = sub.add_parser("stats", help="recompute a run report from directives")
    p.add_argument("--input", required=True, help="directive JSONL path, or - for stdin")
    p.set_defaults(handler=cmd_stats)

    p = sub.add_parser("bench", help="measure engine throughput on a mixed trace")
    p.add_argument("--frames", type=int, required=True)
    p.add_argument("--fps", type=float, default=30.0)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--config", default=None)
    p.set_defaults(handler=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"selfcue: config error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"selfcue: {exc}", file=sys.stderr)
        return 2
    except BrokenPipeError:
        return 0
    except EngineError as exc:
        print(f"selfcue: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
