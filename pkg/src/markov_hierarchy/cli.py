"""Command-line front end.

Exit codes: 0 success, 1 failed Table 1 rows, 2 configuration error,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import ConfigError, load_config
from .errors import NumericalError
from .model import PRESETS
from .runner import run, sweep
from .table1 import DEFAULT_ALPHA, DEFAULT_X, format_report, verify_table1

EXIT_OK, EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def _cmd_run(args) -> int:
    cfg = load_config(args.config)
    result = run(cfg)
    print(result.table())
    for path in result.files:
        print(f"wrote {path}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    text = sweep(cfg, args.param, args.start, args.stop, args.points, jobs=args.jobs)
    out = Path(args.out) if args.out else Path(f"{cfg.output}_sweep_{args.param}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_table1(args) -> int:
    rows = verify_table1(args.x or DEFAULT_X, args.alpha or DEFAULT_ALPHA)
    print(format_report(rows))
    return EXIT_OK if all(r.passed for r in rows) else EXIT_CHECK_FAILED


def _cmd_list(args) -> int:
    for name, info in PRESETS.items():
        scenario = info.build(**info.defaults)
        print(f"{name}: {info.description}")
        print(f"  parameters: {', '.join(info.parameters)}")
        print(f"  defaults:   {', '.join(f'{k}={v:g}' for k, v in info.defaults.items())}")
        print(f"  labels:     {', '.join(scenario.labels)}")
        print(f"  plans:      {', '.join(scenario.plans)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markov-hierarchy",
        description="Adiabatic elimination and first-order Markov effective Hamiltonians.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="propagate a configured scenario and write one CSV per method")
    p.add_argument("config")
    p.set_defaults(func=_cmd_run)

    p = sub.add_parser("verify-table1", help="check the Lambda-system Rabi frequencies")
    p.add_argument("--x", type=float, nargs="+")
    p.add_argument("--alpha", type=float, nargs="+")
    p.set_defaults(func=_cmd_table1)

    p = sub.add_parser("sweep", help="Rabi frequencies over a range of one parameter")
    p.add_argument("config")
    p.add_argument("--param", required=True)
    p.add_argument("--from", dest="start", type=float, required=True)
    p.add_argument("--to", dest="stop", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("list-scenarios", help="show the preset scenarios")
    p.set_defaults(func=_cmd_list)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, ValueError, KeyError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
