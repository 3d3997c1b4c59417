#!/usr/bin/env python3
"""Per-stage latency breakdown of the streaming pipeline.

Times parse, compose, and serialize separately over a mixed trace and
prints p50/p99/max per stage in microseconds.

Usage: python scripts/profile_latency.py [--frames 20000] [--seed 42]
"""

import argparse
import time

from selfcue.engine import Session
from selfcue.synth import Scenario, generate
from selfcue.wire import parse_frame, serialize_directive, serialize_frame


def percentiles(samples: list[float]) -> str:
    samples = sorted(samples)
    n = len(samples)
    p50 = samples[n // 2] * 1e6
    p99 = samples[int(n * 0.99)] * 1e6
    return f"p50 {p50:8.1f} us   p99 {p99:8.1f} us   max {samples[-1] * 1e6:8.1f} us"


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--frames", type=int, default=20000)
    parser.add_argument("--fps", type=float, default=30.0)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    sc = Scenario("mixed", duration_s=args.frames / args.fps, fps=args.fps,
                  seed=args.seed)
    lines = [serialize_frame(f) for f in generate(sc)]

    session = Session()
    parse_t, compose_t, serialize_t = [], [], []
    perf = time.perf_counter
    for line in lines:
        t0 = perf()
        sig = parse_frame(line)
        t1 = perf()
        directive = session.process(sig)
        t2 = perf()
        serialize_directive(directive)
        t3 = perf()
        parse_t.append(t1 - t0)
        compose_t.append(t2 - t1)
        serialize_t.append(t3 - t2)

    total = sum(parse_t) + sum(compose_t) + sum(serialize_t)
    print(f"frames: {len(lines)}   end-to-end: {len(lines) / total:,.0f} frames/s")
    print(f"parse      {percentiles(parse_t)}")
    print(f"compose    {percentiles(compose_t)}")
    print(f"serialize  {percentiles(serialize_t)}")


if __name__ == "__main__":
    main()
