"""Trajectory log I/O.

One JSON record per line: a ``meta`` header carrying the embedded config
and scoring params, one record per simulation tick, and an ``end``
trailer with the termination cause and run counters. Tick records hold
exactly: tick, time, ego{lane, s, speed, accel}, ttc, npc_count,
avg_npc_speed, sparse, speeding, and decision on decision ticks only.
``ttc`` is null when infinite; ``ego.lane`` is the continuous lane
coordinate so lateral motion can be rescored from the log alone.
"""

import json
from math import inf, isinf
from pathlib import Path
from typing import IO, Iterable

__all__ = [
    "LogFormatError",
    "make_row",
    "read_log",
    "write_log",
]


class LogFormatError(ValueError):
    """A log line cannot be parsed; the message names the line number."""


_ROW_KEYS = {
    "tick",
    "time",
    "ego",
    "ttc",
    "npc_count",
    "avg_npc_speed",
    "sparse",
    "speeding",
}
_EGO_KEYS = {"lane", "s", "speed", "accel"}


def make_row(
    tick: int,
    time: float,
    lane: float,
    s: float,
    speed: float,
    accel: float,
    ttc: float,
    npc_count: int,
    avg_npc_speed: float | None,
    sparse: bool,
    speeding: bool,
) -> dict:
    """Tick record in canonical key order; the caller may add a trailing
    ``decision`` key on decision ticks."""
    return {
        "tick": tick,
        "time": time,
        "ego": {"lane": lane, "s": s, "speed": speed, "accel": accel},
        "ttc": None if isinf(ttc) else ttc,
        "npc_count": npc_count,
        "avg_npc_speed": avg_npc_speed,
        "sparse": sparse,
        "speeding": speeding,
    }


def _dump(record: dict) -> str:
    return json.dumps(record, separators=(",", ":"), allow_nan=False)


def write_log(
    fh: IO[str], config: dict, params: dict, rows: Iterable[dict], termination: str, counters: dict
) -> None:
    fh.write(_dump({"meta": {"config": config, "params": params}}) + "\n")
    for row in rows:
        fh.write(_dump(row) + "\n")
    fh.write(_dump({"end": {"termination": termination, "counters": counters}}) + "\n")


def _check_row(record: dict, lineno: int) -> dict:
    missing = _ROW_KEYS - record.keys()
    if missing:
        raise LogFormatError(
            f"line {lineno}: tick record missing fields {sorted(missing)}"
        )
    ego = record["ego"]
    if not isinstance(ego, dict) or _EGO_KEYS - ego.keys():
        raise LogFormatError(f"line {lineno}: malformed ego block")
    extra = record.keys() - _ROW_KEYS - {"decision"}
    if extra:
        raise LogFormatError(f"line {lineno}: unexpected fields {sorted(extra)}")
    return record


def read_log(path: str | Path) -> tuple[dict, list[dict], dict]:
    """Parse a trajectory log into (meta, rows, end).

    Raises LogFormatError naming the first offending line for malformed
    JSON, missing header/trailer, or schema violations.
    """
    meta: dict | None = None
    end: dict | None = None
    rows: list[dict] = []
    lineno = 0
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if end is not None:
                raise LogFormatError(f"line {lineno}: record after end trailer")
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise LogFormatError(f"line {lineno}: invalid JSON ({e.msg})") from None
            if not isinstance(record, dict):
                raise LogFormatError(f"line {lineno}: record is not an object")
            if "meta" in record:
                if lineno > 1 or meta is not None:
                    raise LogFormatError(f"line {lineno}: meta header must be first")
                meta = record["meta"]
            elif "end" in record:
                end = record["end"]
            else:
                if meta is None:
                    raise LogFormatError(f"line {lineno}: missing meta header")
                rows.append(_check_row(record, lineno))
    if meta is None:
        raise LogFormatError("line 1: empty log, missing meta header")
    if end is None:
        raise LogFormatError(f"line {lineno + 1}: truncated log, missing end trailer")
    if not rows:
        raise LogFormatError("line 2: log holds no tick records")
    return meta, rows, end


def row_ttc(row: dict) -> float:
    """TTC from a parsed row; JSON null maps back to infinity."""
    value = row["ttc"]
    return inf if value is None else value
