"""
Command-line front end.

    neutral4 check <suite> --geometry <name|file.geom> [--samples N] [--seed S] [--tol T]
                           [--tier-tol tier=value ...] [--param name=value ...] [--json PATH]
    neutral4 list
    neutral4 describe <suite|model>
    neutral4 golden update|verify

Exit status: 0 pass, 1 fail, 2 the request could not be resolved (unknown
suite, model or parameter, malformed geometry document), 3 an evaluation
could not be carried out; the failing operation is named on stderr.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

from neutral4 import __version__
from neutral4.config import get_settings
from neutral4.errors import (
    DocumentError,
    ExprSyntaxError,
    InoueParameterError,
    Neutral4Error,
    SpecResolutionError,
    UnknownSymbolError,
)
from neutral4.models import MODELS, describe_model, list_models
from neutral4.schemas.models import RunReport, SuiteSpec, canonical_json
from neutral4.schemas.report import Tier, Verdict
from neutral4.suites import golden
from neutral4.suites.registry import SUITES, describe_suite, list_suites
from neutral4.suites.runner import run

logger = logging.getLogger(__name__)
settings = get_settings()

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_RESOLUTION = 2
EXIT_EVALUATION = 3

_RESOLUTION_ERRORS = (SpecResolutionError, DocumentError, ExprSyntaxError, UnknownSymbolError, InoueParameterError)


def _assignments(items: Optional[List[str]], flag: str) -> Dict[str, str]:
    parsed = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise SpecResolutionError(f"{flag} expects name=value, got '{item}'", "cli")
        parsed[name.strip()] = value.strip()
    return parsed


def _float(text: str, what: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise SpecResolutionError(f"{what} must be a number, got '{text}'", "cli") from None


def build_spec(args: argparse.Namespace) -> SuiteSpec:
    params = {k: _float(v, f"parameter {k}") for k, v in _assignments(args.param, "--param").items()}
    tiers = {}
    for name, value in _assignments(args.tier_tol, "--tier-tol").items():
        try:
            tier = Tier(name)
        except ValueError:
            known = ", ".join(t.value for t in Tier)
            raise SpecResolutionError(f"unknown tier '{name}'; known tiers: {known}", "cli") from None
        tiers[tier] = _float(value, f"tolerance for {name}")
    return SuiteSpec(
        suite=args.suite,
        geometry=args.geometry,
        params=params,
        samples=args.samples,
        seed=args.seed,
        tol=args.tol,
        tier_tolerances=tiers,
    )


def render_text(report: RunReport) -> str:
    """Human-readable summary: one line per check, failing clauses with their worst value."""
    spec = report.spec
    seed = f"{spec.seed} (from entropy)" if spec.seed_source == "entropy" else str(spec.seed)
    lines = [f"{spec.suite} on {spec.geometry}: {report.verdict.value.upper()}  (samples {spec.samples}, seed {seed})"]
    for check in report.checks:
        status = "vacuous" if check.vacuous else check.verdict.value
        lines.append(f"  {check.name} [{check.geometry}]: {status}")
        for clause in check.clauses:
            if clause.verdict == Verdict.FAIL:
                lines.append(
                    f"    {clause.name}: worst {clause.worst:.3e} vs {clause.bound.value} bound "
                    f"{clause.tolerance:.1e} at {len(clause.violations)} point(s)"
                )
        for key, value in check.pinned.items():
            lines.append(f"    {key} = {value}")
    if report.expected_failures:
        lines.append(f"  expected failure: {', '.join(report.expected_failures)}")
    lines.append(f"  wall time {report.wall_time:.2f}s")
    return "\n".join(lines)


def cmd_check(args: argparse.Namespace) -> int:
    report = run(build_spec(args))
    print(render_text(report))
    if args.json:
        Path(args.json).write_text(canonical_json(report), encoding="utf-8")
        logger.info(f"Wrote report to {args.json}")
    return EXIT_PASS if report.passed else EXIT_FAIL


def cmd_list(args: argparse.Namespace) -> int:
    print("suites:")
    for name in list_suites():
        print(f"  {describe_suite(name)}")
    print("models:")
    for name in list_models():
        print(f"  {name}: {MODELS[name].summary}")
    return EXIT_PASS


def cmd_describe(args: argparse.Namespace) -> int:
    if args.name in SUITES:
        print(describe_suite(args.name))
    elif args.name in MODELS:
        print(describe_model(args.name))
    else:
        raise SpecResolutionError(f"'{args.name}' is neither a suite nor a model", "describe")
    return EXIT_PASS


def cmd_golden(args: argparse.Namespace) -> int:
    directory = Path(args.dir) if args.dir else None
    if args.action == "update":
        for path in golden.update(directory=directory):
            print(f"wrote {path}")
        return EXIT_PASS
    results = golden.verify(directory)
    for result in results:
        print(f"{result.path.name}: {'ok' if result.ok else 'MISMATCH'}")
        for difference in result.differences:
            print(f"    {difference}")
    return EXIT_PASS if all(r.ok for r in results) else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neutral4", description="Checks for neutral (2,2) four-dimensional geometry"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="Run a check suite on a geometry")
    check.add_argument("suite", help=f"Suite name ({', '.join(SUITES)})")
    check.add_argument("--geometry", required=True, help="Builtin model name or path to a .geom file")
    check.add_argument("--samples", type=int, default=settings.default_samples)
    check.add_argument("--seed", type=int, default=settings.default_seed)
    check.add_argument("--tol", type=float, default=None, help="Override for every residual bound")
    check.add_argument("--tier-tol", action="append", metavar="TIER=VALUE", help="Override one tier")
    check.add_argument("--param", action="append", metavar="NAME=VALUE", help="Parameter override")
    check.add_argument("--json", metavar="PATH", help="Write the JSON report to PATH")
    check.set_defaults(handler=cmd_check)

    listing = commands.add_parser("list", help="List suites and builtin models")
    listing.set_defaults(handler=cmd_list)

    describe = commands.add_parser("describe", help="Describe a suite or a builtin model")
    describe.add_argument("name")
    describe.set_defaults(handler=cmd_describe)

    gold = commands.add_parser("golden", help="Manage the golden corpus")
    gold.add_argument("action", choices=["update", "verify"])
    gold.add_argument("--dir", help="Golden directory (default: NEUTRAL4_GOLDEN_DIR or ./golden)")
    gold.set_defaults(handler=cmd_golden)
    return parser


def configure_logging(verbosity: int) -> None:
    level = {0: settings.log_level.upper(), 1: "INFO"}.get(verbosity, "DEBUG")
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except _RESOLUTION_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_RESOLUTION
    except Neutral4Error as e:
        logger.error(f"Evaluation failed in {e.operation or 'unknown operation'}: {e.message}")
        print(f"error in {e.operation or 'unknown operation'}: {e.message}", file=sys.stderr)
        return EXIT_EVALUATION


if __name__ == "__main__":
    sys.exit(main())
