"""Command-line entry point.

    submig {simulate,image,verify,all} --config run.json [--output DIR]
           [--full-view] [--tau T] [--noise LEVEL] [--seed S]

Exit codes: 0 success, 1 configuration error, 2 numeric-stage error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import pipeline
from .config import ConfigError, load_config

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_VERIFY = 0, 1, 2, 3


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="submig", description="Subspace-migration imaging of small cracks from simulated far-field data.",
        epilog="exit codes: 0 ok, 1 config error, 2 numeric-stage error, 3 verification failure")
    p.add_argument("command", choices=["simulate", "image", "verify", "all"])
    p.add_argument("--config", required=True, help="run configuration (JSON)")
    p.add_argument("--output", help="output directory (overrides the config)")
    p.add_argument("--full-view", action="store_true", help="use the full circle of directions")
    p.add_argument("--tau", type=float, help="relative singular value threshold")
    p.add_argument("--noise", type=float, help="relative noise level")
    p.add_argument("--seed", type=int, help="noise seed")
    p.add_argument("--debug-truncate-bessel", type=int, metavar="TERMS",
                   help=argparse.SUPPRESS)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        cfg = load_config(args.config).with_overrides(
            full_view=args.full_view, tau=args.tau, noise=args.noise,
            seed=args.seed, output=args.output)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        decomposed = None
        if args.command in ("simulate", "all"):
            decomposed = pipeline.simulate(cfg)
        if args.command in ("image", "all"):
            pipeline.image(cfg, decomposed)
        if args.command in ("verify", "all"):
            report = pipeline.verify(cfg, truncate_bessel=args.debug_truncate_bessel)
            failed = [name for name, c in report["checks"].items() if not c["passed"]]
            if failed:
                print(f"verification failed: {', '.join(failed)}", file=sys.stderr)
                return EXIT_VERIFY
    except pipeline.StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
