"""Command-line entry point: ``realforms list`` / ``realforms check``."""
from __future__ import annotations

import argparse
import json
import sys

from .errors import UnknownScenario
from .scenarios import RunOptions, list_scenarios, run_all, run_scenario


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realforms", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    ls = sub.add_parser("list", help="list registered scenarios")
    ls.add_argument("--format", choices=("text", "json"), default="text")

    chk = sub.add_parser("check", help="run one scenario or all of them")
    chk.add_argument("scenario", nargs="?")
    chk.add_argument("--all", action="store_true", help="run every scenario")
    chk.add_argument("--format", choices=("text", "json"), default="text")
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--corpus-size", type=int, default=200)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        items = list_scenarios()
        if args.format == "json":
            print(json.dumps([{"name": n, "description": d} for n, d in items], indent=2))
        else:
            width = max(len(n) for n, _ in items)
            for name, desc in items:
                print(f"{name:<{width}}  {desc}")
        return 0

    if args.all == bool(args.scenario):
        parser.error("check needs exactly one of SCENARIO or --all")
    if args.seed < 0 or args.seed >= 2 ** 64:
        parser.error("--seed must be an unsigned 64-bit integer")
    if args.corpus_size < 0:
        parser.error("--corpus-size must be nonnegative")
    opts = RunOptions(seed=args.seed, corpus_size=args.corpus_size)
    try:
        report = run_all(opts) if args.all else run_scenario(args.scenario, opts)
    except UnknownScenario as exc:
        print(f"realforms: unknown scenario {exc.args[0]!r}", file=sys.stderr)
        return 2
    print(report.to_json() if args.format == "json" else report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
