"""Report emission: JSON documents and CSV tables with a schema header.

JSON keys are sorted and non-finite floats become null. Both formats print
every float with 17 significant digits; CSV tables start with a
``# finsler-lab schema N`` comment line.
"""

import csv
import io
import json
import logging
import math
import sys
from collections.abc import Iterator, Mapping, Sequence
from pathlib import Path

import numpy as np

from finsler_lab.cli.config import OutputFormat
from finsler_lab.errors import EmptyReport

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1
CSV_HEADER = f"# finsler-lab schema {SCHEMA_VERSION}"

Row = Mapping[str, object]


def _plain(value: object) -> object:
    """numpy scalars and arrays to JSON-ready Python values."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return _plain(value.item())
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, Mapping):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_plain(v) for v in value]
    return value


def _cell(value: object) -> str:
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _float17(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    text = f"{value:.17g}"
    return text if any(c in text for c in ".e") else text + ".0"


class _Float17Encoder(json.JSONEncoder):
    """JSON encoder printing floats with 17 significant digits.

    The C accelerator always uses float.__repr__, so encoding goes through the
    pure-Python iterator with its own float formatter.
    """

    def iterencode(self, o: object, _one_shot: bool = False) -> Iterator[str]:
        encoder = (
            json.encoder.py_encode_basestring_ascii
            if self.ensure_ascii
            else json.encoder.py_encode_basestring
        )
        return json.encoder._make_iterencode(  # type: ignore[attr-defined,no-any-return]
            {} if self.check_circular else None,
            self.default,
            encoder,
            self.indent,
            _float17,
            self.key_separator,
            self.item_separator,
            self.sort_keys,
            self.skipkeys,
            _one_shot,
        )


def render_json(results: Sequence[Row], command: str) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "command": command, "results": _plain(list(results))}
    return json.dumps(doc, indent=2, sort_keys=True, cls=_Float17Encoder) + "\n"


def render_csv(results: Sequence[Row]) -> str:
    """Columns follow the first row's key order; every row must share them."""
    columns = list(results[0].keys())
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in results:
        if list(row.keys()) != columns:
            raise ValueError(f"CSV row columns {list(row.keys())} differ from {columns}")
        writer.writerow([_cell(row[c]) for c in columns])
    return buf.getvalue()


def emit_report(
    results: Sequence[Row],
    fmt: OutputFormat | str,
    out: Path | None = None,
    command: str = "",
) -> str:
    """Render ``results`` and write them to ``out`` (stdout when None)."""
    if not results:
        raise EmptyReport(f"No results to emit for {command or 'report'}")
    fmt = OutputFormat(fmt)
    text = render_json(results, command) if fmt is OutputFormat.json else render_csv(results)
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text, encoding="utf-8")
        logger.info("Wrote %d %s rows to %s", len(results), fmt, out)
    return text


def parse_csv_report(text: str) -> list[dict[str, float | str]]:
    """Read a CSV emitted by ``render_csv``; numeric cells become floats."""
    lines = text.splitlines()
    if not lines or lines[0].strip() != CSV_HEADER:
        raise ValueError(f"Missing schema header {CSV_HEADER!r}")
    rows: list[dict[str, float | str]] = []
    for raw in csv.DictReader(lines[1:]):
        row: dict[str, float | str] = {}
        for key, cell in raw.items():
            try:
                row[key] = float(cell)
            except ValueError:
                row[key] = cell
        rows.append(row)
    return rows
