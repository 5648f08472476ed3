"""CSV and JSON serialization of record lists."""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

Record = Dict[str, Any]


def render_csv(records: List[Record], fields: Sequence[str]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=list(fields), lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for record in records:
        writer.writerow(record)
    return buffer.getvalue()


def render_json(payload: Any) -> str:
    return json.dumps(payload, indent=2, ensure_ascii=True) + "\n"


def render(records: List[Record], fields: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return render_json([{field: record.get(field) for field in fields} for record in records])
    return render_csv(records, fields)


def emit(text: str, output_path: Optional[str]) -> None:
    if not output_path:
        sys.stdout.write(text)
        return
    path = Path(output_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        handle.write(text)
