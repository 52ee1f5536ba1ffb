"""Report exporter implementations.

Each exporter writes one table to one file and prefixes it with the run's
provenance (tool version, config hash, seeds, input checksum). Nothing
time-dependent is written, so identical runs give identical files.
"""

import asyncio
import json
import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path

import duckdb
import numpy as np
import pandas as pd
import pyarrow as pa

from regimecast import __version__
from regimecast.config.run import ReportFormat

logger = logging.getLogger(__name__)

_TEXT_FLOAT = "{:.4f}".format


@dataclass(frozen=True)
class Provenance:
    """Everything needed to trace a report back to its run."""

    config_hash: str
    seeds: dict[str, int] = field(default_factory=dict)
    input_checksum: str | None = None
    version: str = __version__

    def as_dict(self) -> dict[str, str]:
        """Return the provenance as ordered string pairs."""
        values = {
            "tool": f"regimecast {self.version}",
            "config_hash": self.config_hash,
            "seeds": ",".join(f"{k}={v}" for k, v in sorted(self.seeds.items())),
        }
        if self.input_checksum is not None:
            values["input_sha256"] = self.input_checksum
        return values

    def header(self, title: str | None = None) -> str:
        """Return the provenance as ``#`` comment lines."""
        lines = [f"# {key}: {value}" for key, value in self.as_dict().items()]
        if title:
            lines.append(f"# table: {title}")
        return "\n".join(lines) + "\n"


class IReportExporter(ABC):
    """Interface for report exporters."""

    @property
    @abstractmethod
    def report_format(self) -> ReportFormat:
        """The format this exporter writes."""

    @abstractmethod
    def write(
        self, frame: pd.DataFrame, target_path: Path, provenance: Provenance, title: str
    ) -> Path:
        """Write a table to ``target_path``.

        Args:
            frame: The table to write.
            target_path: The file to create or overwrite.
            provenance: Run provenance written ahead of the table.
            title: Table name recorded with the provenance.

        Returns:
            The written path.

        """

    async def export_data(
        self, frame: pd.DataFrame, target_path: Path, provenance: Provenance, title: str
    ) -> Path:
        """Write a table in a worker thread."""
        return await asyncio.to_thread(
            self.write, frame, target_path, provenance, title
        )


class CsvReportExporter(IReportExporter):
    """Comma-separated values behind a ``#`` provenance header."""

    report_format = ReportFormat.CSV

    def write(
        self, frame: pd.DataFrame, target_path: Path, provenance: Provenance, title: str
    ) -> Path:
        target_path.parent.mkdir(parents=True, exist_ok=True)
        body = frame.to_csv(index=False, lineterminator="\n")
        target_path.write_text(provenance.header(title) + body, encoding="utf-8")
        return target_path


class TextReportExporter(IReportExporter):
    """Aligned fixed-width table for reading next to the printed panels."""

    report_format = ReportFormat.TEXT

    def write(
        self, frame: pd.DataFrame, target_path: Path, provenance: Provenance, title: str
    ) -> Path:
        target_path.parent.mkdir(parents=True, exist_ok=True)
        body = frame.to_string(index=False, na_rep="", float_format=_TEXT_FLOAT)
        target_path.write_text(
            provenance.header(title) + body + "\n", encoding="utf-8"
        )
        return target_path


def _json_value(value: object) -> object:
    if isinstance(value, float | np.floating):
        return None if math.isnan(value) else float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, pd.Timestamp):
        return value.strftime("%Y-%m-%d")
    if value is pd.NA or value is pd.NaT:
        return None
    return value


class JsonReportExporter(IReportExporter):
    """JSON document with a ``provenance`` key and the table rows."""

    report_format = ReportFormat.JSON

    def write(
        self, frame: pd.DataFrame, target_path: Path, provenance: Provenance, title: str
    ) -> Path:
        target_path.parent.mkdir(parents=True, exist_ok=True)
        rows = [
            {str(k): _json_value(v) for k, v in record.items()}
            for record in frame.to_dict(orient="records")
        ]
        document = {"provenance": provenance.as_dict(), "table": title, "rows": rows}
        target_path.write_text(
            json.dumps(document, indent=2, ensure_ascii=False) + "\n", encoding="utf-8"
        )
        return target_path


def _arrow_ready(frame: pd.DataFrame) -> pd.DataFrame:
    # all-None columns have no Arrow type DuckDB can write
    empty = [
        c for c in frame.columns if frame[c].isna().all() and frame[c].dtype == object
    ]
    return frame.astype({c: "float64" for c in empty}) if empty else frame


class DuckDBParquetReportExporter(IReportExporter):
    """Parquet through DuckDB from an Arrow table; provenance as key-value metadata."""

    report_format = ReportFormat.PARQUET

    def write(
        self, frame: pd.DataFrame, target_path: Path, provenance: Provenance, title: str
    ) -> Path:
        target_path.parent.mkdir(parents=True, exist_ok=True)
        metadata = {**provenance.as_dict(), "table": title}
        kv = ", ".join(
            f"{key}: '{value.replace(chr(39), chr(39) * 2)}'"
            for key, value in metadata.items()
        )
        conn = duckdb.connect(database=":memory:", read_only=False)
        try:
            arrow_table = pa.Table.from_pandas(
                _arrow_ready(frame), preserve_index=False
            )
            conn.register("report_view", arrow_table)
            conn.execute(
                f"COPY (SELECT * FROM report_view) TO '{target_path}' "
                f"(FORMAT PARQUET, CODEC 'ZSTD', KV_METADATA {{{kv}}});"
            )
        finally:
            conn.close()
        return target_path


class ExporterFactory:
    """Factory for creating report exporter instances."""

    @staticmethod
    def get_exporter(report_format: ReportFormat | str) -> IReportExporter:
        """Get an exporter for a report format.

        Args:
            report_format: One of csv, text, json or parquet.

        Returns:
            An instance of IReportExporter.

        Raises:
            ValueError: If the format is unsupported.

        """
        match ReportFormat(report_format):
            case ReportFormat.CSV:
                return CsvReportExporter()
            case ReportFormat.TEXT:
                return TextReportExporter()
            case ReportFormat.JSON:
                return JsonReportExporter()
            case ReportFormat.PARQUET:
                return DuckDBParquetReportExporter()
        raise ValueError(f"Unsupported report format: {report_format}")


async def export_table(
    frame: pd.DataFrame,
    out_dir: Path,
    name: str,
    formats: list[ReportFormat],
    provenance: Provenance,
) -> list[Path]:
    """Write one table in every requested format as ``out_dir/name.<ext>``."""
    written = []
    for report_format in formats:
        exporter = ExporterFactory.get_exporter(report_format)
        target = out_dir / f"{name}.{report_format.extension}"
        written.append(await exporter.export_data(frame, target, provenance, name))
        logger.debug("Wrote %s", target)
    return written
