"""
Command-line front end.

Subcommands print JSON (or CSV for the figure data) on stdout or to --out;
diagnostics go to stderr through logging.
"""

import argparse
import logging
import sys
from typing import Callable, List, Optional

from . import __version__
from .critical import critical_q
from .models import Family, SweepConfig, SymParams
from .response import lrt
from .sweeps import FIGURES
from .utils import emit, frame_to_csv, frame_to_json, model_to_json, provenance
from .verification import SuiteConfig, roof_report, run_suite

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def cmd_verify(args: argparse.Namespace) -> int:
    cfg = SuiteConfig(seed=args.seed, grid=args.grid, oracle_samples=args.oracle_samples,
                      restarts=args.restarts, tol_scale=args.tol_scale)
    report = run_suite(cfg, args.check or ())
    emit(model_to_json(report), args.out)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        print(f"Failed checks: {', '.join(failed)}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    params = SymParams(alpha=args.alpha, beta=args.beta, gamma=args.gamma)
    emit(model_to_json(lrt(params)), args.out)
    return EXIT_OK


def _figure_command(name: str) -> Callable[[argparse.Namespace], int]:
    def run(args: argparse.Namespace) -> int:
        cfg = SweepConfig(grid=args.grid, seed=args.seed, out=args.out,
                          format=args.format, workers=args.workers)
        df = FIGURES[name](cfg)
        flags = {"grid": cfg.grid, "format": cfg.format}
        if cfg.format == "csv":
            text = frame_to_csv(df, provenance(name, cfg.seed, flags))
        else:
            text = frame_to_json(df, {"command": name, "seed": cfg.seed, **flags})
        emit(text, cfg.out)
        logger.info(f"{name}: wrote {len(df)} rows to {cfg.out or 'stdout'}")
        return EXIT_OK
    return run


def cmd_roof(args: argparse.Namespace) -> int:
    report = roof_report(args.state, args.q, args.m, args.restarts, args.seed)
    emit(model_to_json(report), args.out)
    if report.gap < -1e-4:
        print(f"Oracle exceeds the ansatz by {-report.gap:.3e}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_critical(args: argparse.Namespace) -> int:
    family = Family(args.family)
    param = args.beta if family is Family.G else args.alpha
    if param is None:
        raise ValueError(f"--{'beta' if family is Family.G else 'alpha'} is required for family {family.value}")
    emit(model_to_json(critical_q(family, param, args.gamma)), args.out)
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import TangleResponseServer

    TangleResponseServer(args.port, host=args.host).start()
    return EXIT_OK


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", type=str, default=None, help="Output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tangle-response",
        description="Linear response of concurrence and three-tangle to W-type noise"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="Run the invariant suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--grid", type=int, default=5, help="(q~, p) grid per axis for the critical-noise checks")
    p.add_argument("--oracle-samples", type=int, default=4, help="States per convex-roof check")
    p.add_argument("--restarts", type=int, default=16, help="Convex-roof restarts per state")
    p.add_argument("--tol-scale", type=float, default=1.0, help="Multiply every tolerance")
    p.add_argument("--check", action="append", help="Run only this check (repeatable)")
    _add_out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("report", help="Response of one symmetric three-qubit state")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    _add_out(p)
    p.set_defaults(func=cmd_report)

    for name in FIGURES:
        p = sub.add_parser(name, help=f"Data for {name}")
        p.add_argument("--grid", type=int, default=41)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--workers", type=int, default=1)
        _add_out(p)
        p.set_defaults(func=_figure_command(name))

    p = sub.add_parser("roof", help="Convex-roof oracle against the ansatz")
    p.add_argument("--state", type=str, required=True, help="'2q:THETA' or '3q:ALPHA,BETA[,GAMMA]'")
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--m", type=int, default=None, help="Ensemble size")
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    _add_out(p)
    p.set_defaults(func=cmd_roof)

    p = sub.add_parser("critical", help="Critical noise of a G or J state")
    p.add_argument("--family", choices=[f.value for f in Family], required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--gamma", type=float, default=0.0)
    _add_out(p)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("serve", help="Serve the computations over HTTP")
    p.add_argument("--port", type=int, default=5001)
    p.add_argument("--host", type=str, default="127.0.0.1")
    p.set_defaults(func=cmd_serve)

    return parser


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the subcommand and map errors to exit codes."""
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)

    try:
        return args.func(args)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except ArithmeticError as e:
        logger.error(f"Numerical failure: {e}", exc_info=True)
        return EXIT_CHECK_FAILED
    except KeyboardInterrupt:
        print("\nInterrupted by user", file=sys.stderr)
        return EXIT_CHECK_FAILED
