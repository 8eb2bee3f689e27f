import csv
import json
import logging
from pathlib import Path
from typing import Sequence

from src.application.dtos.experiment_dtos import ExperimentSummary
from src.application.interfaces.i_result_repository import IResultRepository, SeriesRow

logger = logging.getLogger(__name__)

SERIES_HEADER = ("N", "re", "im", "abs", "delta")


def _fmt(value: float) -> str:
    return format(value, ".17g")


class FileResultRepository(IResultRepository):
    """Writes ``series.csv`` and ``summary.json`` into one output directory."""

    def __init__(self, output_dir: Path):
        self._output_dir = Path(output_dir)

    @property
    def output_dir(self) -> Path:
        return self._output_dir

    def _ensure_dir(self) -> None:
        self._output_dir.mkdir(parents=True, exist_ok=True)

    def _serialize_row(self, row: SeriesRow) -> list[str]:
        return [
            str(row.N),
            _fmt(row.value.real),
            _fmt(row.value.imag),
            _fmt(abs(row.value)),
            "" if row.delta is None else _fmt(row.delta),
        ]

    def save_series(self, rows: Sequence[SeriesRow]) -> Path:
        self._ensure_dir()
        path = self._output_dir / "series.csv"
        with path.open("w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(SERIES_HEADER)
            writer.writerows(self._serialize_row(row) for row in rows)
        logger.info("Wrote %d rows to %s", len(rows), path)
        return path

    def save_summary(self, summary: ExperimentSummary) -> Path:
        self._ensure_dir()
        path = self._output_dir / "summary.json"
        payload = summary.model_dump(mode="json")
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info("Wrote summary to %s", path)
        return path
