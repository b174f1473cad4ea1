"""Command-line entry point: ``courantkit <command> <model-file> [flags]``."""

import argparse
import logging
import shlex
import sys
from typing import List, Optional

from .config import Settings, configure_logging, load_settings
from .errors import CourantKitError
from .model import load_model
from .runner import COMMANDS, EXIT_INPUT, ReportDocument, RunFlags, run_command

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="courantkit",
        description="Exact verification of Lie algebroids, bialgebroids, Courant algebroids and Dirac structures",
    )
    parser.add_argument("command", choices=list(COMMANDS), help="Check to run")
    parser.add_argument("model", help="Path to the model file")
    parser.add_argument("--double", help="Name of the double to check")
    parser.add_argument("--u", help="First Poisson tensor for compose")
    parser.add_argument("--v", help="Second Poisson tensor for compose")
    parser.add_argument("--graph-of", dest="graph_of", help="Bivector or 2-form whose graph is checked")
    parser.add_argument("--h", nargs="+", default=[], metavar="NAME",
                        help="Sections (or one subbundle) spanning the subbundle under test")
    sign = parser.add_mutually_exclusive_group()
    sign.add_argument("--plus", action="store_true", help="compose: U (U+V)^-1 V (default)")
    sign.add_argument("--minus", action="store_true", help="compose: the bialgebroid paired by U-V")
    parser.add_argument("--omega", help="2-form for the Nijenhuis variant of hamiltonian")
    parser.add_argument("--pi", help="Poisson tensor for hamiltonian, reduce-check and dual-pair")
    parser.add_argument("--morphism", help="Morphism to check (default: all)")
    parser.add_argument("--triples", choices=["distinct", "all"], default="distinct",
                        help="Frame triples: distinct indices or with repetition")
    parser.add_argument("--samples", type=int, default=None,
                        help="Random sections added to each clause [default: COURANTKIT_SAMPLES]")
    parser.add_argument("--max-degree", dest="max_degree", type=int, default=None,
                        help="Degree bound for random coefficients")
    parser.add_argument("--seed", type=int, default=None, help="Seed for random sections")
    parser.add_argument("--workers", type=int, default=None, help="Thread-pool width")
    parser.add_argument("--identities", action="store_true",
                        help="courant-check: also run the bracket identity suite")
    parser.add_argument("--porcelain", action="store_true", help="Emit JSON instead of text")
    return parser


def build_flags(args: argparse.Namespace, settings: Settings) -> RunFlags:
    """Command flags, with the tunables taken from the resolved settings."""
    return RunFlags(
        double=args.double, u=args.u, v=args.v, graph_of=args.graph_of, h=list(args.h),
        plus=args.plus, minus=args.minus, omega=args.omega, pi=args.pi, morphism=args.morphism,
        triples=args.triples, samples=settings.samples, max_degree=settings.max_degree,
        seed=settings.seed, workers=settings.workers, identities=args.identities,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run one command and print its report.

    Returns:
        0 if every clause passed, 1 if a check failed, 2 on input errors
    """
    argv = sys.argv[1:] if argv is None else argv
    args = build_parser().parse_args(argv)
    echo = "courantkit " + " ".join(shlex.quote(a) for a in argv)

    try:
        settings = load_settings(max_degree=args.max_degree, workers=args.workers, seed=args.seed,
                                 samples=args.samples)
    except ValueError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_INPUT
    configure_logging(settings)

    try:
        doc = load_model(args.model)
    except (CourantKitError, OSError, UnicodeDecodeError) as exc:
        report = ReportDocument(echo, error=f"{args.model}: {exc}", exit_code=EXIT_INPUT)
    else:
        flags = build_flags(args, settings)
        logger.debug("running %s on %s", args.command, args.model)
        report = run_command(doc, args.command, flags, echo)

    if args.porcelain:
        print(report.to_json())
    else:
        sys.stdout.write(report.to_text())
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
