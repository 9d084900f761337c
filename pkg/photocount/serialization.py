"""JSON and CSV writers sharing one number format.

Floats are rendered with 17 significant digits in both formats, so a JSON
document and the CSV export of the same run carry identical numbers.
"""
from __future__ import annotations

import csv
import io
import math
import sys
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional

import numpy as np
import orjson

SCHEMA = "photocount/1"


def format_float(value: float) -> Optional[str]:
    """Round-trip decimal form, or None for NaN and infinities."""
    if not math.isfinite(value):
        return None
    return f"{value:.17g}"


def _prepare(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, (float, np.floating)):
        text = format_float(float(value))
        return None if text is None else orjson.Fragment(text)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, Mapping):
        return {str(k): _prepare(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_prepare(v) for v in value]
    # mpmath numbers and anything else float-convertible
    return _prepare(float(value))


def document(command: str, params: Optional[Mapping[str, Any]], rows: List[Dict[str, Any]], **extra: Any) -> Dict[str, Any]:
    """One versioned output document per run."""
    doc: Dict[str, Any] = {"schema": SCHEMA, "command": command}
    if params is not None:
        doc["params"] = dict(params)
    doc.update(extra)
    doc["rows"] = rows
    return doc


def dumps_json(doc: Mapping[str, Any]) -> bytes:
    return orjson.dumps(_prepare(doc), option=orjson.OPT_INDENT_2 | orjson.OPT_APPEND_NEWLINE)


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format_float(float(value)) or ""


def _scalars(doc: Mapping[str, Any]) -> Dict[str, Any]:
    # run-level scalars broadcast onto every CSV row
    out: Dict[str, Any] = {}
    for key, value in doc.items():
        if key in ("rows", "schema", "command"):
            continue
        if isinstance(value, Mapping):
            out.update({k: v for k, v in value.items() if not isinstance(v, (Mapping, list, tuple))})
        elif not isinstance(value, (list, tuple)):
            out[key] = value
    return out


def dumps_csv(doc: Mapping[str, Any]) -> bytes:
    """Header plus one line per row, LF terminated."""
    rows: Iterable[Mapping[str, Any]] = doc.get("rows", [])
    scalars = _scalars(doc)
    records = [{**scalars, **row} for row in rows]
    fieldnames: List[str] = []
    for record in records:
        fieldnames.extend(k for k in record if k not in fieldnames)

    buffer = io.StringIO(newline="")
    writer = csv.DictWriter(buffer, fieldnames=fieldnames, lineterminator="\n")
    writer.writeheader()
    for record in records:
        writer.writerow({k: _cell(record.get(k)) for k in fieldnames})
    return buffer.getvalue().encode("utf-8")


def emit(doc: Mapping[str, Any], fmt: str = "json", output: Optional[Path] = None) -> None:
    """Write a document to a file or to standard output."""
    payload = dumps_csv(doc) if fmt == "csv" else dumps_json(doc)
    if output is None:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()
        return
    output.write_bytes(payload)
