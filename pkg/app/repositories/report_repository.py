"""Writing and reading run outputs."""
import csv
import json
import logging
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from app.config import settings
from app.schemas.experiment import ComparisonReport, VerifySummary

logger = logging.getLogger(__name__)

REPORT_COLUMNS = ["s", "F_empirical", "F_formula", "abs_diff"]
SAMPLE_COLUMNS = ["trial_id", "r", "X"]
CHECK_COLUMNS = ["name", "measured", "allowed", "passed"]

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """17 significant digits with '.' as decimal separator."""
    return format(float(value), ".17g")


class ReportRepository:
    """File storage for comparison reports, sample tables and verify summaries."""

    def __init__(self, output_dir: Optional[PathLike] = None):
        self.output_dir = Path(output_dir or settings.output_dir)

    def _resolve(self, path: Optional[PathLike], default_name: str) -> Path:
        target = Path(path) if path else self.output_dir / default_name
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def emit_report(
        self, report: ComparisonReport, fmt: str = "csv", path: Optional[PathLike] = None
    ) -> Path:
        """Write the table as CSV, or the full report with metadata as JSON.

        Wall-clock runtime is left out of both, so a fixed seed reproduces either
        file byte for byte; the run log carries the timing.
        """
        if fmt not in ("csv", "json"):
            raise ValueError(f"unknown report format {fmt!r}")
        target = self._resolve(path, f"report_{report.seed}.{fmt}")
        with open(target, "w", newline="", encoding="utf-8") as handle:
            if fmt == "csv":
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(REPORT_COLUMNS)
                for row in report.rows:
                    writer.writerow(
                        [format_float(getattr(row, column)) for column in REPORT_COLUMNS]
                    )
            else:
                json.dump(report.model_dump(exclude={"runtime"}), handle, indent=2)
                handle.write("\n")
        logger.info("report written to %s", target)
        return target

    def load_report(self, path: PathLike) -> ComparisonReport:
        with open(path, encoding="utf-8") as handle:
            return ComparisonReport.model_validate(json.load(handle))

    def write_samples(
        self, samples: np.ndarray, r_list: Sequence[float], path: Optional[PathLike] = None
    ) -> Path:
        """One row (trial_id, r, X) per trial and label."""
        samples = np.atleast_2d(samples)
        target = self._resolve(path, "samples.csv")
        with open(target, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(SAMPLE_COLUMNS)
            for trial, row in enumerate(samples):
                for r, x in zip(r_list, row):
                    writer.writerow([trial, format_float(r), format_float(x)])
        logger.info("%d samples written to %s", samples.shape[0], target)
        return target

    def write_summary(self, summary: VerifySummary, fmt: str = "csv", path: Optional[PathLike] = None) -> Path:
        target = self._resolve(path, f"verify_{summary.seed}.{fmt}")
        with open(target, "w", newline="", encoding="utf-8") as handle:
            if fmt == "json":
                json.dump(summary.model_dump(exclude={"runtime"}), handle, indent=2)
                handle.write("\n")
            else:
                writer = csv.writer(handle, lineterminator="\n")
                writer.writerow(CHECK_COLUMNS)
                for check in summary.checks:
                    writer.writerow(
                        [check.name, format_float(check.measured), format_float(check.allowed), check.passed]
                    )
        return target
