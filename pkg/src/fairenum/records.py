"""JSON-lines result records.

One JSON object per line, keys sorted, compact separators.  Fields holding
wall-clock measurements are named ``*_seconds`` or live under a key starting
with ``timing``; everything else is reproducible bit for bit from the
record's parameters.
"""

from __future__ import annotations

import json
import math
from pathlib import Path

__all__ = ["dumps_record", "write_record", "read_records", "strip_timing", "is_timing_key"]


def _clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    return obj


def dumps_record(record: dict) -> str:
    return json.dumps(_clean(record), sort_keys=True, separators=(",", ":"), allow_nan=False)


def write_record(stream, record: dict) -> None:
    stream.write(dumps_record(record) + "\n")
    stream.flush()


def read_records(path) -> list:
    path = Path(path)
    if not path.exists():
        return []
    out = []
    with path.open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                out.append(json.loads(line))
            except json.JSONDecodeError:
                # a torn final line from an interrupted run; it gets recomputed
                continue
    return out


def is_timing_key(key: str) -> bool:
    return key.endswith("_seconds") or key.startswith("timing")


def strip_timing(obj):
    """Copy of ``obj`` without timing fields, for reproducibility comparisons."""
    if isinstance(obj, dict):
        return {k: strip_timing(v) for k, v in obj.items() if not is_timing_key(k)}
    if isinstance(obj, list):
        return [strip_timing(v) for v in obj]
    return obj
