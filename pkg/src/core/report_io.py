"""Persistence of experiment reports (JSON document or per-case CSV)."""

import csv
import hashlib
import json
from pathlib import Path
from typing import Union

from pydantic import ValidationError

from src.config.logging_config import get_logger
from src.models.errors import ReportIOError
from src.models.experiment import ExperimentReport

logger = get_logger(__name__)

CSV_COLUMNS = ("index", "input", "measured", "oracle", "pass")
REPORT_FORMATS = ("json", "csv")


def report_to_json(report: ExperimentReport) -> str:
    """Serialise a report as one JSON document; floats keep full precision."""
    data = report.model_dump(mode="json", by_alias=True)
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def _csv_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_report(report: ExperimentReport, path: Union[str, Path], fmt: str = "json") -> Path:
    """Write a report to ``path``.

    Args:
        report: Report to write
        path: Destination file; parent directories are created
        fmt: "json" (config, cases, summary) or "csv" (one row per case)

    Returns:
        The written path

    Raises:
        ReportIOError: On an unknown format or any I/O failure
    """
    path = Path(path)
    if fmt not in REPORT_FORMATS:
        raise ReportIOError(path, f"unknown report format '{fmt}'")
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            if fmt == "json":
                f.write(report_to_json(report))
            else:
                writer = csv.writer(f, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for case in report.cases:
                    row = case.model_dump(by_alias=True)
                    writer.writerow([_csv_value(row[column]) for column in CSV_COLUMNS])
    except OSError as e:
        raise ReportIOError(path, e.strerror or str(e)) from e

    logger.info(f"Wrote {fmt} report with {len(report.cases)} case(s) to: {path}")
    return path


def load_report(path: Union[str, Path]) -> ExperimentReport:
    """Read a JSON report written by write_report.

    Raises:
        ReportIOError: If the file is missing, unreadable or not a valid report
    """
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except OSError as e:
        raise ReportIOError(path, e.strerror or str(e)) from e
    except json.JSONDecodeError as e:
        raise ReportIOError(path, f"invalid JSON: {e}") from e
    try:
        return ExperimentReport.model_validate(data)
    except ValidationError as e:
        raise ReportIOError(path, f"not an experiment report: {e.error_count()} validation error(s)") from e


def report_fingerprint(report: ExperimentReport) -> str:
    """MD5 of the report with wall time removed; equal for equal seeded runs."""
    data = report.model_dump(mode="json", by_alias=True)
    data["summary"].pop("wall_ms", None)
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"))
    return hashlib.md5(canonical.encode("utf-8")).hexdigest()
