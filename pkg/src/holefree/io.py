"""JSON and CSV formats for nets, key sets, point sets and hole reports.

Every number that could be large is written as a string: integers in
decimal, rationals as ``"p/q"``. Keys are written in a fixed order with a
trailing newline, so equal inputs give equal bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from holefree.embed import ScaleSchedule, build_schedule
from holefree.goodset import BinaryAlmostNet, PointKey
from holefree.netgen import NetPoint

# Embedded coordinates easily exceed the default 4300-digit limit on
# int <-> str conversion; exact decimal output is the whole point here.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


class FormatError(ValueError):
    """A file does not match its format; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=1) + "\n"


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(str(path), f"cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(str(path), f"invalid JSON at line {exc.lineno}: {exc.msg}") from None


# ---------------------------------------------------------------- scalars

def fraction_str(x: int | Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_fraction(text: Any, field: str) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise FormatError(field, f"expected a \"p/q\" string, got {type(text).__name__}")
    try:
        value = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise FormatError(field, f"not an exact rational: {text!r}") from None
    if "e" in text.lower() or "." in text:
        raise FormatError(field, f"decimal or exponent notation is not exact: {text!r}")
    return value


def _need(obj: dict, key: str, kind: type, where: str) -> Any:
    if not isinstance(obj, dict):
        raise FormatError(where, "expected a JSON object")
    if key not in obj:
        raise FormatError(f"{where}.{key}" if where else key, "missing")
    val = obj[key]
    if kind is int and (isinstance(val, bool) or not isinstance(val, int)):
        raise FormatError(key, f"expected an integer, got {val!r}")
    if kind is not int and not isinstance(val, kind):
        raise FormatError(key, f"expected {kind.__name__}, got {type(val).__name__}")
    return val


def _bitstring(v: Any, field: str, length: int | None = None) -> str:
    if not isinstance(v, str) or any(ch not in "01" for ch in v):
        raise FormatError(field, f"not a bitstring: {v!r}")
    if length is not None and len(v) != length:
        raise FormatError(field, f"expected {length} digits, got {len(v)}")
    return v


# ---------------------------------------------------------------- nets

def net_to_json(points: Sequence[NetPoint], m: int) -> dict:
    s = points[0].s if points else 0
    digits = points[0].min_digits if points else m
    return {"s": s, "m": m, "digits_per_coord": digits,
            "points": [p.strings() for p in points]}


def net_from_json(obj: Any) -> tuple[list[NetPoint], int, int]:
    """Returns ``(points, s, m)``."""
    s = _need(obj, "s", int, "")
    m = _need(obj, "m", int, "")
    digits = _need(obj, "digits_per_coord", int, "")
    rows = _need(obj, "points", list, "")
    if s < 1 or m < 0 or digits < m:
        raise FormatError("digits_per_coord", f"need s >= 1 and digits >= m (s={s}, m={m}, digits={digits})")
    pts = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != s:
            raise FormatError(f"points[{i}]", f"expected {s} bitstrings")
        pts.append(NetPoint.from_strings([_bitstring(v, f"points[{i}][{j}]", digits)
                                          for j, v in enumerate(row)]))
    return pts, s, m


# ---------------------------------------------------------------- key sets

def good_to_json(Y: BinaryAlmostNet) -> dict:
    return {"d": Y.d, "m": Y.m, "T": Y.T, "eps": fraction_str(Y.eps), "n": Y.n,
            "keys": [list(k) for k in Y.keys]}


def good_from_json(obj: Any) -> BinaryAlmostNet:
    d = _need(obj, "d", int, "")
    m = _need(obj, "m", int, "")
    T = _need(obj, "T", int, "")
    n = _need(obj, "n", int, "")
    eps = parse_fraction(_need(obj, "eps", object, ""), "eps")
    rows = _need(obj, "keys", list, "")
    keys: list[PointKey] = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise FormatError(f"keys[{i}]", f"expected {d} bitstrings")
        keys.append(tuple(_bitstring(v, f"keys[{i}][{j}]", m) for j, v in enumerate(row)))
    try:
        return BinaryAlmostNet(tuple(keys), T, eps, n, m, d)
    except ValueError as exc:
        raise FormatError("keys", str(exc)) from None


# ---------------------------------------------------------------- point sets

def schedule_to_json(sched: ScaleSchedule) -> dict:
    return {"B": str(sched.base), "m": sched.m, "growth": sched.growth}


def schedule_from_json(obj: Any, d: int) -> ScaleSchedule:
    m = _need(obj, "m", int, "schedule")
    base = _need(obj, "B", str, "schedule")
    growth = obj.get("growth", "geometric")
    if not base.isdigit():
        raise FormatError("schedule.B", f"expected a decimal integer, got {base!r}")
    try:
        return build_schedule(d, m, int(base), growth)
    except ValueError as exc:
        raise FormatError("schedule", str(exc)) from None


def points_to_json(coords: Sequence[Sequence[int | Fraction]], sched: ScaleSchedule | None = None,
                   source_keys: Sequence[PointKey] | None = None, extra: dict | None = None) -> dict:
    d = len(coords[0]) if coords else (sched.d if sched else 0)
    out: dict[str, Any] = {"d": d, "coords": [[fraction_str(v) for v in p] for p in coords]}
    if sched is not None:
        out["schedule"] = schedule_to_json(sched)
    if source_keys is not None:
        out["source_keys"] = [list(k) for k in source_keys]
    if extra:
        out.update(extra)
    return out


def points_from_json(obj: Any) -> tuple[list[tuple[Fraction | int, ...]], ScaleSchedule | None,
                                        list[PointKey] | None]:
    """Returns ``(points, schedule, source_keys)``; integral values come back as ``int``."""
    d = _need(obj, "d", int, "")
    rows = _need(obj, "coords", list, "")
    pts = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != d:
            raise FormatError(f"coords[{i}]", f"expected {d} entries")
        vals = []
        for j, v in enumerate(row):
            x = parse_fraction(v, f"coords[{i}][{j}]")
            vals.append(x.numerator if x.denominator == 1 else x)
        pts.append(tuple(vals))
    sched = schedule_from_json(obj["schedule"], d) if "schedule" in obj else None
    keys = None
    if "source_keys" in obj:
        keys = [tuple(_bitstring(v, f"source_keys[{i}]") for v in row)
                for i, row in enumerate(obj["source_keys"])]
        if len(keys) != len(pts):
            raise FormatError("source_keys", f"{len(keys)} keys for {len(pts)} points")
    return pts, sched, keys


def points_csv(coords: Sequence[Sequence[int | Fraction]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    d = len(coords[0]) if coords else 0
    w.writerow([f"x{i + 1}" for i in range(d)])
    for p in coords:
        w.writerow([fraction_str(v) for v in p])
    return buf.getvalue()


# ---------------------------------------------------------------- reports

def hole_report(mode: str, ell: int | None, result: str, witness: Sequence[int] | None,
                caps_hit: bool, predicate_calls: int, **extra: Any) -> dict:
    out = {"mode": mode, "ell": ell, "result": result,
           "witness": list(witness) if witness is not None else [],
           "caps_hit": bool(caps_hit), "predicate_calls": int(predicate_calls)}
    out.update(extra)
    return out
