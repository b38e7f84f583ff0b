"""Small IO helpers for vanderbound.

Reports must be byte-identical for identical inputs, so every JSON document in
the repository goes through `dumps_json` (fixed indent, key order as built,
shortest round-trip float repr) and is written atomically. Output is strict
JSON: non-finite floats are written as the strings "inf", "-inf" and "nan"
and read back as floats.
"""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Any, Iterator, Optional, Sequence

NON_FINITE = {"inf": math.inf, "-inf": -math.inf, "nan": math.nan}


def encode_non_finite(data: Any) -> Any:
    if isinstance(data, float) and not math.isfinite(data):
        if math.isnan(data):
            return "nan"
        return "inf" if data > 0 else "-inf"
    if isinstance(data, dict):
        return {key: encode_non_finite(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [encode_non_finite(value) for value in data]
    return data


def decode_non_finite(data: Any) -> Any:
    if isinstance(data, str):
        return NON_FINITE.get(data, data)
    if isinstance(data, dict):
        return {key: decode_non_finite(value) for key, value in data.items()}
    if isinstance(data, list):
        return [decode_non_finite(value) for value in data]
    return data


def dumps_json(data: Any, *, indent: Optional[int] = 2) -> str:
    """Serialize `data` the one way reports are serialized everywhere."""

    text = json.dumps(encode_non_finite(data), ensure_ascii=False, indent=indent, allow_nan=False)
    return text + "\n" if indent is not None else text


def loads_json(text: str) -> Any:
    return decode_non_finite(json.loads(text))


def read_json(path: Path) -> Any:
    """Read a JSON file and return the decoded Python object."""

    return loads_json(Path(path).read_text(encoding="utf-8"))


def write_json(path: Path, data: Any, *, indent: int = 2) -> None:
    """Write a JSON file (pretty-printed by default)."""

    write_text(path, dumps_json(data, indent=indent))


def read_jsonl(path: Path) -> Iterator[Any]:
    """Read a JSONL file line-by-line."""

    with Path(path).open("r", encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if not line:
                continue
            yield loads_json(line)


def write_jsonl(path: Path, records: Sequence[Any]) -> None:
    """Write a JSONL file in one shot."""

    payload = "\n".join(dumps_json(record, indent=None) for record in records)
    if payload:
        payload += "\n"
    write_text(path, payload)


def write_text(path: Path, payload: str) -> None:
    """Write via a temp file so a crashed run never leaves a half-written report."""

    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp_path = path.with_suffix(path.suffix + ".tmp")
    with tmp_path.open("w", encoding="utf-8") as f:
        f.write(payload)
    tmp_path.replace(path)
