"""
Command-line front end for the verification suites.

    python verify.py --suite all
    python verify.py --suite clifford --fixture cl33-from-cl06 --json report.json

The text report goes to stdout, logs to stderr. The exit code is 0 when the report
has no FAIL record, 1 when it has, and 2 when the run itself could not start
(unknown suite, missing data file).
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from app.core.config import settings
from app.core.exceptions import ToolkitError
from app.models.schemas import SuiteOptions, VerificationReport
from app.services.fixture_loader import fixture_loader
from app.services.group_registry import group_registry
from app.services.suites import verification_service
from app.utils.helpers import ReportRenderer

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="verify", description="Run exact verification suites and report each check.")
    parser.add_argument("--suite", default="all", help=f"suite id: {', '.join(verification_service.suite_names())}")
    parser.add_argument("--fixture", help="restrict the Clifford suite to one named fixture")
    parser.add_argument("--constants", help="substitute constants file for the mass suite")
    parser.add_argument("--json", dest="json_path", help="also write the report as JSON to this path")
    parser.add_argument("--cache-dir", help=f"character-table cache directory (default {settings.cache_dir})")
    parser.add_argument("--seed", type=int, help=f"seed for randomized checks (default {settings.default_seed})")
    parser.add_argument("--list", action="store_true", help="list suites, Clifford fixtures and registry groups")
    parser.add_argument("--export-table", metavar="GROUP", help="print the character table of a registry group as JSON")
    parser.add_argument("--render", metavar="REPORT", help="re-render a JSON report as text")
    parser.add_argument("--log-level", default=settings.log_level, help="logging level for stderr")
    return parser


def _listing() -> str:
    lines = ["suites: " + ", ".join(verification_service.suite_names()), "clifford fixtures:"]
    lines += [f"  {name}" for name in fixture_loader.clifford_names()]
    lines.append("groups:")
    lines += [f"  {name:<18} {group_registry.describe(name)}" for name in group_registry.names()]
    return "\n".join(lines) + "\n"


def run(args: argparse.Namespace) -> int:
    if args.list:
        sys.stdout.write(_listing())
        return EXIT_OK
    if args.export_table:
        cache = verification_service.table_cache(args.cache_dir)
        table = cache.get(args.export_table)
        sys.stdout.write(json.dumps(cache.export(args.export_table, table), indent=1) + "\n")
        return EXIT_OK
    if args.render:
        report = VerificationReport.model_validate_json(Path(args.render).read_text())
    else:
        options = SuiteOptions(fixture=args.fixture, seed=args.seed, constants_file=args.constants,
                               cache_dir=args.cache_dir)
        report = verification_service.run_suite(args.suite, options)
        if args.json_path:
            Path(args.json_path).write_text(report.model_dump_json(indent=2))
            logger.info(f"Wrote JSON report to {args.json_path}")
    sys.stdout.write(ReportRenderer.render_text(report))
    return EXIT_OK if report.passed else EXIT_FAILURES


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), stream=sys.stderr,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return run(args)
    except ToolkitError as e:
        logger.error(f"Verification run failed: {str(e)}")
        sys.stderr.write(f"error: {str(e)}\n")
        return EXIT_ERROR
    except (OSError, ValueError) as e:
        logger.error(f"Cannot read or write report: {str(e)}")
        sys.stderr.write(f"error: {str(e)}\n")
        return EXIT_ERROR
