"""Naive scanning reference for rank and select; ground truth in tests."""

from __future__ import annotations

from .errors import BadSymbolError, OutOfRangeError


def scan_rank(text, c, p):
    """Count of c in s[0, p) by linear scan."""
    if not 0 <= c < text.sigma:
        raise BadSymbolError(f"symbol {c} outside alphabet [0, {text.sigma})")
    if not 0 <= p <= text.n:
        raise OutOfRangeError(f"prefix {p} out of range [0, {text.n}]")
    symbols = text.symbols()
    count = 0
    for i in range(p):
        if symbols[i] == c:
            count += 1
    return count


def scan_select(text, c, j):
    """Position of the j-th (1-based) occurrence of c, or -1."""
    if not 0 <= c < text.sigma:
        raise BadSymbolError(f"symbol {c} outside alphabet [0, {text.sigma})")
    if j < 1:
        raise OutOfRangeError(f"occurrence ordinal must be >= 1, got {j}")
    seen = 0
    for i, sym in enumerate(text.symbols()):
        if sym == c:
            seen += 1
            if seen == j:
                return i
    return -1
