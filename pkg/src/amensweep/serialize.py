"""Canonical JSON helpers: exact rationals, deterministic dumps, hashing.

Every number that matters is an exact rational rendered as ``p/q`` (or a
bare integer when the denominator is 1).  Dumps are byte-deterministic:
sorted keys, fixed separators, UTF-8.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .errors import FormatError


def frac_str(x: Fraction | int) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s: str) -> Fraction:
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}: {exc}") from None


def canonical_dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def dump_json(obj, path: str | Path) -> bytes:
    data = (canonical_dumps(obj) + "\n").encode("utf-8")
    Path(path).write_bytes(data)
    return data


def load_json(path: str | Path):
    p = Path(path)
    if not p.exists():
        raise FileNotFoundError(str(p))
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{p}: invalid JSON: {exc}") from None


def sha256_bytes(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def sha256_file(path: str | Path) -> str:
    return sha256_bytes(Path(path).read_bytes())


def require(cond: bool, message: str):
    if not cond:
        raise FormatError(message)
