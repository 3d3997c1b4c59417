#!/usr/bin/env python3
"""Run every synthetic scenario through the engine and tabulate the cues.

Usage: python scripts/run_scenarios.py [--duration 8] [--fps 30] [--seed 42]
"""

import argparse

from selfcue.engine import Session
from selfcue.report import RunReport
from selfcue.synth import SCENARIO_KINDS, Scenario, annotations, generate


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--duration", type=float, default=8.0)
    parser.add_argument("--fps", type=float, default=30.0)
    parser.add_argument("--seed", type=int, default=42)
    args = parser.parse_args()

    header = (f"{'scenario':<12} {'frames':>6} {'flash+':>6} {'flash-':>6} "
              f"{'icons':>6} {'nod s':>7} {'shake s':>7} {'tilt s':>7} {'annotated'}")
    print(header)
    print("-" * len(header))
    for kind in SCENARIO_KINDS:
        sc = Scenario(kind, duration_s=args.duration, fps=args.fps, seed=args.seed)
        session = Session()
        report = RunReport()
        for frame in generate(sc):
            report.frames_in += 1
            report.observe(session.process(frame))
        icon_total = sum(report.icon_counts.values())
        expected = ",".join(a.kind for a in annotations(sc)) or "-"
        print(f"{kind:<12} {report.frames_out:>6} "
              f"{report.flash_onsets['positive']:>6} {report.flash_onsets['negative']:>6} "
              f"{icon_total:>6} {report.seconds_with['nod']:>7.2f} "
              f"{report.seconds_with['shake']:>7.2f} {report.seconds_with['tilt']:>7.2f} "
              f"{expected}")


if __name__ == "__main__":
    main()
