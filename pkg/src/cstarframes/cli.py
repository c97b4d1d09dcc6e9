"""Command line interface.

Verbs:
  analyze      full report for a scenario (bounds, conversions, inversion)
  verify       run every per-instance check and report named verdicts
  reconstruct  round-trip a seeded element through analysis and inversion
  dump-frame   print the node/weight/vector table of a scenario
  suite        randomized property suite over generated instances

Exit codes: 0 all requested checks passed, 1 a verification failed or a
computation error occurred, 2 bad input (arguments or scenario file).
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

from . import __version__
from .errors import CStarFramesError, ScenarioError
from .scenario import (
    AnalysisReport,
    default_seed,
    emit,
    load_scenario,
    run_analysis,
    run_dump,
    run_reconstruction,
    run_verification,
)
from .suite import EXPONENTS, run_property_suite

FORMATS = ("human", "json", "csv")


def _add_output_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=FORMATS, default="human", help="output format")
    p.add_argument("--out", metavar="PATH", help="write the report to a file instead of stdout")
    p.add_argument("--seed", type=int, default=None,
                   help=f"override the scenario seed (default: file seed, then $CSTARFRAMES_SEED)")


def _add_scenario_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("scenario", help="builtin name (example1, example2) or path to a TOML file")
    p.add_argument("--alpha", type=float, default=None,
                   help="controller scale for builtin scenarios")
    p.add_argument("--size", type=int, default=None,
                   help="algebra dimension for the example2 builtin")
    p.add_argument("--nodes", type=int, default=None,
                   help="quadrature node count for the example1 builtin")
    _add_output_options(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstarframes",
        description="frame operators, bound certificates and iterative "
        "reconstruction for matrix-algebra valued frames",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full report for a scenario")
    _add_scenario_options(p)

    p = sub.add_parser("verify", help="run every per-instance check")
    _add_scenario_options(p)

    p = sub.add_parser("reconstruct", help="round-trip a seeded element")
    _add_scenario_options(p)
    p.add_argument("--tol", type=float, default=None,
                   help="relative residual tolerance (default: scenario setting)")
    p.add_argument("--max-iter", type=int, default=10_000,
                   help="iteration ceiling for the Neumann solve")

    p = sub.add_parser("dump-frame", help="print the node/weight/vector table")
    _add_scenario_options(p)

    p = sub.add_parser("suite", help="randomized property suite")
    p.add_argument("--cases", type=int, default=200, help="number of generated instances")
    p.add_argument("--max-dim", type=int, default=4, help="largest algebra dimension")
    p.add_argument("--max-rank", type=int, default=3, help="largest module rank")
    p.add_argument("--max-nodes", type=int, default=64, help="largest measure size")
    p.add_argument("--conversion-exponent", choices=EXPONENTS, default="derivation",
                   help="which plain-to-controlled bound formula to check")
    _add_output_options(p)
    return parser


def _write(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            seed = args.seed if args.seed is not None else default_seed()
            report = run_property_suite(
                seed=seed,
                cases=args.cases,
                max_dim=args.max_dim,
                max_rank=args.max_rank,
                max_nodes=args.max_nodes,
                conversion_exponent=args.conversion_exponent,
            ).to_report()
        else:
            scenario = load_scenario(
                args.scenario,
                alpha=args.alpha,
                size=args.size,
                nodes=args.nodes,
                seed=args.seed,
            )
            if args.command == "analyze":
                report = run_analysis(scenario)
            elif args.command == "verify":
                report = run_verification(scenario)
            elif args.command == "reconstruct":
                report = run_reconstruction(scenario, tol=args.tol, max_iter=args.max_iter)
            else:
                report = run_dump(scenario)
    except ScenarioError as e:
        print(f"cstarframes: {e}", file=sys.stderr)
        return 2
    except ValueError as e:
        # bad numeric arguments to the suite or a scenario constructor
        print(f"cstarframes: {e}", file=sys.stderr)
        return 2
    except CStarFramesError as e:
        print(f"cstarframes: {type(e).__name__}: {e}", file=sys.stderr)
        return 1
    _write(emit(report, args.format), args.out)
    return 1 if report.failed else 0


if __name__ == "__main__":
    sys.exit(main())
