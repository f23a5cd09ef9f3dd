"""Probe-counted access to a read-only symbol sequence.

Everything downstream sees symbols only through ProbedText.access, which
charges exactly one probe to the caller's session.  Builders and the scanning
oracle read through symbols(), which is deliberately uncharged: preprocessing
reads are outside the query probe model.
"""

from __future__ import annotations

import struct

from .errors import (
    EmptyTextError,
    MalformedInputError,
    OutOfRangeError,
    SigmaExceedsLengthError,
)

FORMATS = ("raw8", "u32le", "tokens")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_U64 = (1 << 64) - 1


class ProbeSession:
    """Per-query probe counter; independent sessions never interact."""

    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


class ProbedText:
    """Immutable sequence over [0, sigma) with counted access."""

    __slots__ = ("_payload", "_n", "_sigma", "_fingerprint")

    def __init__(self, symbols, sigma):
        payload = tuple(symbols)
        if not payload:
            raise EmptyTextError("text must contain at least one symbol")
        for pos, sym in enumerate(payload):
            if not 0 <= sym < sigma:
                raise MalformedInputError(
                    f"symbol {sym} at position {pos} outside alphabet [0, {sigma})"
                )
        if sigma > len(payload):
            raise SigmaExceedsLengthError(
                f"sigma {sigma} exceeds text length {len(payload)}"
            )
        self._payload = payload
        self._n = len(payload)
        self._sigma = sigma
        self._fingerprint = None

    @property
    def n(self):
        return self._n

    @property
    def sigma(self):
        return self._sigma

    def access(self, session, i):
        """Return s[i], charging one probe.  Out-of-range probes are free."""
        if not 0 <= i < self._n:
            raise OutOfRangeError(f"position {i} out of range [0, {self._n})")
        session.count += 1
        return self._payload[i]

    def symbols(self):
        """Uncharged view of the payload, for builders and the oracle only."""
        return self._payload

    @property
    def fingerprint(self):
        """FNV-1a over n (u64 LE), sigma (u32 LE), then each symbol as u32 LE."""
        if self._fingerprint is None:
            h = _FNV_OFFSET
            for byte in struct.pack("<QI", self._n, self._sigma):
                h = ((h ^ byte) * _FNV_PRIME) & _U64
            pack = struct.pack
            for sym in self._payload:
                for byte in pack("<I", sym):
                    h = ((h ^ byte) * _FNV_PRIME) & _U64
            self._fingerprint = h
        return self._fingerprint

    def __len__(self):
        return self._n

    def __repr__(self):
        return f"ProbedText(n={self._n}, sigma={self._sigma})"


def load(data, fmt, declared_sigma=None):
    """Decode raw bytes in one of the wire formats into a ProbedText.

    raw8   - one symbol per byte
    u32le  - one symbol per 32-bit little-endian unsigned integer
    tokens - ASCII decimal integers separated by whitespace
    """
    if fmt not in FORMATS:
        raise MalformedInputError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    symbols = _decode(data, fmt)
    if not symbols:
        raise EmptyTextError("input contains no symbols")
    if declared_sigma is not None:
        if declared_sigma < 2:
            raise MalformedInputError(f"sigma must be at least 2, got {declared_sigma}")
        sigma = declared_sigma
        for pos, sym in enumerate(symbols):
            if sym >= sigma:
                raise MalformedInputError(
                    f"symbol {sym} at position {pos} outside alphabet [0, {sigma})"
                )
    else:
        sigma = max(2, max(symbols) + 1)
    return ProbedText(symbols, sigma)


def _decode(data, fmt):
    if fmt == "raw8":
        return list(data)
    if fmt == "u32le":
        if len(data) % 4:
            raise MalformedInputError(
                f"u32le payload length {len(data)} is not a multiple of 4"
            )
        return list(struct.unpack(f"<{len(data) // 4}I", data))
    try:
        decoded = data.decode("ascii")
    except UnicodeDecodeError:
        raise MalformedInputError("tokens input is not ASCII text") from None
    out = []
    for pos, tok in enumerate(decoded.split()):
        try:
            value = int(tok, 10)
        except ValueError:
            raise MalformedInputError(
                f"token {tok!r} at position {pos} is not a decimal integer"
            ) from None
        if value < 0:
            raise MalformedInputError(f"token {value} at position {pos} is negative")
        out.append(value)
    return out
