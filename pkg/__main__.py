#!/usr/bin/env python3
"""
Weighted Gaussian laboratory CLI - Main entry point.

Usage:
    gauss-lab solve --config CONFIG [--out DIR] [--threads K] [--override key=value ...]
    gauss-lab penalize-sweep --config CONFIG
    gauss-lab prox-check --config CONFIG
    gauss-lab project-check --config CONFIG
    gauss-lab neumann-check --config CONFIG
    gauss-lab ibp-check --config CONFIG
    gauss-lab identities [--config CONFIG]

Exit status: 0 all contracts pass, 1 input error, 2 contract violation.
"""

import sys
import argparse

COMMAND_HELP = {
    "solve": "Galerkin solve with regularity report",
    "penalize-sweep": "Penalized whole-space solves against the direct domain solve",
    "prox-check": "Moreau-Yosida property suite on the configured weight",
    "project-check": "Projection property suite on the configured domain",
    "neumann-check": "Boundary flux residual along a series of degrees",
    "ibp-check": "Integration by parts with boundary traces",
    "identities": "Closed-form sums of the covariance spectrum",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gauss-lab",
        description="Elliptic problems on weighted Gaussian spaces",
        epilog="Use 'gauss-lab <command> --help' for command-specific help",
    )

    subparsers = parser.add_subparsers(
        dest="command",
        title="commands",
        description="available commands",
    )

    for name, help_text in COMMAND_HELP.items():
        sub = subparsers.add_parser(name, help=help_text)
        sub.add_argument(
            "-c", "--config",
            default=None,
            help="Path to the YAML run configuration (defaults when omitted)",
        )
        sub.add_argument(
            "-o", "--out",
            default=None,
            help="Output directory (overrides output.directory)",
        )
        sub.add_argument(
            "-t", "--threads",
            type=int,
            default=None,
            help="Worker pool cap (overrides LAB_THREADS)",
        )
        sub.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="Dotted-path config override, e.g. solver.lambda=0.5 (repeatable)",
        )
    return parser


def main(argv=None):
    """Main CLI entry point with subcommands."""
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command is None:
        parser.print_help()
        sys.exit(1)

    from .config.settings import configure_logging
    from .cli.runner import run

    configure_logging()
    handler, result = run(
        args.command,
        config_path=args.config,
        overrides=args.override,
        out_dir=args.out,
        threads=args.threads,
    )
    print(handler.format_output(result))

    sys.exit(result.get("exit_code", 0 if result.get("success", False) else 1))


if __name__ == "__main__":
    main()
