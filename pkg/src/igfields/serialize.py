"""Deterministic JSON/CSV rendering shared by the CLI and report types.

Identical inputs must yield byte-identical output, so floats are printed
with a fixed 17-significant-digit format and JSON keys are sorted.
"""

from __future__ import annotations

import math


def format_float(x: float) -> str:
    """Render a finite float with 17 significant digits ('%.17g')."""
    if not math.isfinite(x):
        raise ValueError(f"non-finite float {x!r} in canonical output")
    return "%.17g" % x


def format_value(value) -> str:
    """Render one CSV cell: floats canonically, everything else via str."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value)
    return str(value)


def csv_line(values) -> str:
    """One CSV record; cells containing separators are quoted (RFC 4180)."""
    cells = []
    for value in values:
        cell = format_value(value)
        if any(ch in cell for ch in ',"\n'):
            cell = '"' + cell.replace('"', '""') + '"'
        cells.append(cell)
    return ",".join(cells)


def canonical_json(obj, indent: int = 0) -> str:
    """Serialize to JSON with sorted keys and canonical float formatting."""
    pad = " " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, str):
        return _json_string(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(
            pad + "  " + canonical_json(x, indent + 2) for x in obj
        )
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = []
        for key in sorted(obj):
            if not isinstance(key, str):
                raise TypeError(f"JSON object keys must be str, got {key!r}")
            items.append(
                pad + "  " + _json_string(key) + ": "
                + canonical_json(obj[key], indent + 2)
            )
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


_ESCAPES = {
    '"': '\\"', "\\": "\\\\", "\b": "\\b", "\f": "\\f",
    "\n": "\\n", "\r": "\\r", "\t": "\\t",
}


def _json_string(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch in _ESCAPES:
            out.append(_ESCAPES[ch])
        elif ord(ch) < 0x20:
            out.append("\\u%04x" % ord(ch))
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)
