"""CSV and Markdown rendering of simulation result tables"""

from __future__ import annotations

import csv
import io
import logging
from typing import Literal

from .exceptions import ParseError, UsageError
from .models import ResultRow, ResultTable

logger = logging.getLogger(__name__)

TableFormat = Literal["csv", "markdown"]

COLUMNS: tuple[str, ...] = (
    "function",
    "n",
    "snr",
    "noise",
    "method",
    "mean_mse",
    "sd_mse",
    "ratio",
    "p_value",
    "highlight",
)

_FLOAT_COLUMNS = frozenset({"snr", "mean_mse", "sd_mse", "ratio", "p_value"})


def _cell(row: ResultRow, column: str) -> str:
    value = getattr(row, column)
    if column in _FLOAT_COLUMNS:
        return f"{value:.6g}"
    if column == "highlight":
        return "1" if value else "0"
    return str(value)


def emit_table(table: ResultTable, fmt: TableFormat = "csv") -> str:
    """Render *table* with a fixed column order and 6 significant digits.

    Raises:
        UsageError: for a table without rows or an unknown format.
    """
    if not table.rows:
        raise UsageError("Cannot emit an empty result table")
    if fmt == "csv":
        return _emit_csv(table)
    if fmt == "markdown":
        return _emit_markdown(table)
    raise UsageError(f"Unknown table format '{fmt}'; expected 'csv' or 'markdown'")


def _emit_csv(table: ResultTable) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\r\n")
    writer.writerow(COLUMNS)
    for row in table.rows:
        writer.writerow([_cell(row, column) for column in COLUMNS])
    return buffer.getvalue()


def _emit_markdown(table: ResultTable) -> str:
    # Leader and ties (p >= alpha) are shown in bold, like the printed tables
    lines = [
        "| function | n | snr | noise | method | ratio (sd x1e-3) | mean_mse | p_value |",
        "|---|---:|---:|---|---|---:|---:|---:|",
    ]
    for row in table.rows:
        ratio = f"{row.ratio:.2f} ({row.sd_mse * 1e3:.2f})"
        if row.highlight:
            ratio = f"**{ratio}**"
        lines.append(
            f"| {row.function} | {row.n} | {row.snr:g} | {row.noise} | {row.method} "
            f"| {ratio} | {row.mean_mse:.6g} | {row.p_value:.3g} |"
        )
    return "\n".join(lines) + "\n"


def parse_table(text: str, alpha: float = 0.05) -> ResultTable:
    """Read CSV produced by :func:`emit_table` back into a :class:`ResultTable`.

    Raises:
        ParseError: for a missing header or a malformed row.
    """
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames is None or tuple(reader.fieldnames) != COLUMNS:
        raise ParseError(f"Expected header {','.join(COLUMNS)}", line_number=1)
    rows = []
    for record in reader:
        try:
            values = {**record, "highlight": record["highlight"] == "1"}
            rows.append(ResultRow.model_validate(values))
        except ValueError as err:
            raise ParseError(f"Malformed result row: {err}", line_number=reader.line_num) from err
    return ResultTable(rows=rows, alpha=alpha)
