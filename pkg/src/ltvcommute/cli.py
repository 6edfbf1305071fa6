"""Command line entry point: ``ltvcommute <action> --config FILE``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from .scenario import ACTIONS, builtin_names, load_builtin, load_config, run, with_overrides


def _parser():
    ap = argparse.ArgumentParser(prog="ltvcommute", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list-examples", help="print the built-in scenarios")
    for action in ACTIONS:
        p = sub.add_parser(action, help=f"run the {action} action")
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", help="scenario JSON file")
        src.add_argument("--example", help="built-in scenario name (see list-examples)")
        p.add_argument("--horizon", type=int, help="override the scenario horizon K")
        p.add_argument("--out", default="out", help="output directory (default: ./out)")
        p.add_argument("--tolerance", type=float, help="relative comparison tolerance")
        p.add_argument("--seed", type=int, default=0, help="seed for the randomized oracle")
        p.add_argument("--c0", type=float)
        p.add_argument("--c1", type=float)
        p.add_argument("--alpha", type=float)
        p.add_argument("--beta", type=float)
        p.add_argument("--order", choices=("AB", "BA", "both"))
        ics = p.add_mutually_exclusive_group()
        ics.add_argument("--with-ics", dest="with_ics", action="store_true", default=None)
        ics.add_argument("--no-ics", dest="with_ics", action="store_false")
    return ap


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "list-examples":
        for name in builtin_names():
            cfg = load_builtin(name)
            print(f"{name:36s} {cfg.action:14s} {cfg.description}")
        return 0
    try:
        cfg = load_builtin(args.example) if args.example else load_config(args.config)
        cfg = with_overrides(
            cfg, horizon=args.horizon, tolerance=args.tolerance, c0=args.c0, c1=args.c1,
            alpha=args.alpha, beta=args.beta, order=args.order, with_ics=args.with_ics,
        )
        cfg = replace(cfg, action=args.command)
        report = run(cfg, args.out, seed=args.seed)
    except (OSError, ValueError, KeyError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print("\n".join(report.lines()))
    return report.exit_status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
