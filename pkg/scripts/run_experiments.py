"""Script to run every experiment kind with default sizes and write JSON + CSV reports."""

import argparse
import os
import sys
from pathlib import Path

# Add src to path (scripts/ -> project root -> src/)
sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.config.env_loader import load_environment_variables
from src.config.logging_config import get_logger, level_for_verbosity, setup_logging
from src.config.settings import get_settings
from src.core.experiment_runner import run_experiment
from src.core.report_io import write_report
from src.models.experiment import ExperimentConfig, ExperimentKind

logger = get_logger(__name__)


def main() -> int:
    """Run all suites; exit 5 when any case failed."""
    parser = argparse.ArgumentParser(description="Run every experiment suite and write reports")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out-dir", type=Path, help="Report directory (default: settings reports_dir)")
    parser.add_argument("--kind", action="append", choices=[k.value for k in ExperimentKind],
                        help="Run only this kind (repeatable)")
    parser.add_argument("--log-file", type=Path, help="Also append log records to this file")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    args = parser.parse_args()

    project_root = Path(__file__).parent.parent
    load_environment_variables(project_root)
    settings = get_settings()
    setup_logging(
        level=level_for_verbosity(args.verbose, os.getenv("LOG_LEVEL", settings.log_level)),
        log_file=args.log_file,
    )
    out_dir = args.out_dir or settings.get_reports_dir(project_root)
    kinds = [ExperimentKind(k) for k in args.kind] if args.kind else list(ExperimentKind)

    print("=" * 60)
    print("One-clean-qubit experiment batch")
    print("=" * 60)
    print(f"Seed: {args.seed}")
    print(f"Reports will be saved to: {out_dir}")
    print()

    failures = 0
    for kind in kinds:
        report = run_experiment(ExperimentConfig(kind=kind, seed=args.seed))
        write_report(report, out_dir / f"{kind.value}.json", "json")
        write_report(report, out_dir / f"{kind.value}.csv", "csv")
        summary = report.summary
        status = "ok" if report.all_passed else "FAILED"
        print(f"{kind.value:<14} {summary.passed:>4}/{summary.total:<4} "
              f"max dev {summary.max_dev:.3g}  {summary.wall_ms:.0f} ms  {status}")
        if not report.all_passed:
            failures += 1
            logger.warning(f"{kind.value}: {summary.total - summary.passed} case(s) failed")

    print()
    print("=" * 60)
    print("All suites passed" if not failures else f"{failures} suite(s) with failures")
    return 0 if not failures else 5


if __name__ == "__main__":
    sys.exit(main())
