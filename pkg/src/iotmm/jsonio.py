"""Deterministic JSON writing with exact Decimal numbers.

The stdlib encoder can only emit Decimal through float or as a string, so
numbers are rendered here and everything else is delegated to ``json``.
"""

from __future__ import annotations

import json
import math
from decimal import Decimal


def _number(x) -> str:
    if isinstance(x, Decimal):
        if not x.is_finite():
            raise ValueError(f"non-finite number {x}")
        s = format(x, "f")
        return "0" if s in ("-0", "-0.0") else s
    if not math.isfinite(x):
        raise ValueError(f"non-finite number {x}")
    return repr(x)


def _emit(obj, level: int, indent: int, out: list[str]) -> None:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        out.append(json.dumps(obj))
    elif isinstance(obj, int):
        out.append(str(obj))
    elif isinstance(obj, (float, Decimal)):
        out.append(_number(obj))
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, key in enumerate(sorted(obj)):
            out.append(f"{pad}{json.dumps(str(key))}: ")
            _emit(obj[key], level + 1, indent, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
            return
        out.append("[\n")
        for i, item in enumerate(obj):
            out.append(pad)
            _emit(item, level + 1, indent, out)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "]")
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """Sorted-key, indented JSON text ending in a newline."""
    out: list[str] = []
    _emit(obj, 0, indent, out)
    out.append("\n")
    return "".join(out)


def loads(text: str):
    """Parse JSON keeping every non-integer number as an exact Decimal."""
    return json.loads(text, parse_float=Decimal)
