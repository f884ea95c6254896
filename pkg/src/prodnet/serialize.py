"""Shared output formatting: 10-significant-digit floats, stable JSON."""

from __future__ import annotations

import json

SIG_DIGITS = 10


def gstr(x: float) -> str:
    """Format a float at 10 significant digits for CSV cells."""
    return format(float(x), f".{SIG_DIGITS}g")


def fnum(x: float) -> float:
    """Round a float to 10 significant digits (for JSON payloads)."""
    return float(gstr(x))


def round_floats(obj):
    """Recursively round every float in a JSON-style structure."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, float):
        return fnum(obj)
    if isinstance(obj, dict):
        return {k: round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [round_floats(v) for v in obj]
    return obj


def dumps(obj) -> str:
    """Serialize with stable key order (insertion order) and rounded floats."""
    return json.dumps(round_floats(obj), indent=2, allow_nan=False) + "\n"
