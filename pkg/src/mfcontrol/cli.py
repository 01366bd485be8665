"""Command line entry point: ``mfcontrol run|compare|estimate-demo``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ConfigurationError, IntegratorFault, WeatherLoadError
from .harness import Scenario, compare, demo_csv_text, estimate_demo, run_scenario

log = logging.getLogger("mfcontrol")


def _cmd_run(args) -> int:
    sc = Scenario.load(args.scenario)
    if args.estimator:
        sc = sc.with_changes(estimator=args.estimator)
    result = run_scenario(sc)
    paths = result.write(args.out)
    m = result.metrics
    print(f"{sc.name}: e_Ti mean {m['temperature']['mean_error']:+.3f} degC, "
          f"var {m['temperature']['variance']:.3f}; e_Hi mean {m['hygrometry']['mean_error']:+.2f} %, "
          f"var {m['hygrometry']['variance']:.2f}; heat on {m['on_time_min']['heat']:.0f} min")
    for kind, p in paths.items():
        print(f"  {kind}: {p}")
    return 0


def _cmd_compare(args) -> int:
    result = compare(Scenario.load(args.a), Scenario.load(args.b), parallel=args.parallel)
    text = json.dumps(result, indent=2)
    if args.out:
        Path(args.out).write_text(text)
    print(text)
    return 0


def _cmd_demo(args) -> int:
    spec = json.loads(Path(args.spec).read_text())
    text = demo_csv_text(estimate_demo(spec))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfcontrol", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run one scenario and write CSV + metrics JSON")
    p.add_argument("scenario")
    p.add_argument("--out", default="out")
    p.add_argument("--estimator", choices=["closed_loop", "algebraic"])
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("compare", help="run two scenarios on the same weather and compare metrics")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out")
    p.add_argument("--parallel", action="store_true", help="run both scenarios in separate processes")
    p.set_defaults(func=_cmd_compare)

    p = sub.add_parser("estimate-demo", help="estimator traces for a closed-form F signal")
    p.add_argument("spec")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_demo)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ConfigurationError, WeatherLoadError, IntegratorFault) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
