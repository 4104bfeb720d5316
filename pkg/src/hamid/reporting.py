"""Shared formatting for deterministic CSV output."""
from __future__ import annotations

import math


def format_float(x) -> str:
    """Fixed 12-significant-digit rendering; None becomes an empty field."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")
