"""JSON and CSV result files, written atomically."""

from __future__ import annotations

import csv
import io
import logging
from collections.abc import Sequence
from pathlib import Path
from typing import Any

import orjson
from pydantic import BaseModel
from sfqsim.shared.files import atomic_write_bytes, atomic_write_text

logger = logging.getLogger(__name__)


def dump_json(value: BaseModel | Sequence[BaseModel] | dict[str, Any]) -> bytes:
    if isinstance(value, BaseModel):
        payload: Any = value.model_dump(mode="json")
    elif isinstance(value, dict):
        payload = {
            key: item.model_dump(mode="json") if isinstance(item, BaseModel) else item
            for key, item in value.items()
        }
    else:
        payload = [item.model_dump(mode="json") for item in value]
    return orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)


def write_json(path: Path, value: BaseModel | Sequence[BaseModel] | dict[str, Any]) -> Path:
    atomic_write_bytes(path, dump_json(value))
    logger.info("wrote %s", path)
    return path


def render_csv(rows: Sequence[BaseModel], fields: Sequence[str] | None = None) -> str:
    """Header plus one line per row, '.' decimals and '\\n' line endings."""
    if fields is None:
        fields = list(type(rows[0]).model_fields) if rows else []
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fields), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.model_dump(include=set(fields)))
    return buffer.getvalue()


def write_csv(path: Path, rows: Sequence[BaseModel], fields: Sequence[str] | None = None) -> Path:
    atomic_write_text(path, render_csv(rows, fields))
    logger.info("wrote %d rows to %s", len(rows), path)
    return path
