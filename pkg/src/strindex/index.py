"""Block-decomposed systematic index with hard per-query probe budgets.

The sequence is cut into blocks of sigma consecutive positions (the last may
be shorter).  Per block: a unary bitstring Z = 1^{n_0} 0 1^{n_1} 0 ... encodes
symbol multiplicities; a monotone hash per present symbol ranks in-block
occurrences; shortcut tables invert the block's stable-sort permutation; a
predecessor structure per present symbol counts occurrences below a position.
Across blocks, one unary bitvector per symbol locates occurrences by block.

select walks: block via the cross vector (probe-free), then one permutation
inversion (<= 2t+1 probes).  rank adds a predecessor query whose accessor is
the in-block select, giving (3 + ceil(log2 k)) * (2t+1) probes at worst.
access is a single probe.  The stored index never contains sequence symbols,
only counts and permutation shortcuts.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .bits import BitBuilder, BitReader, BitWriter
from .errors import (
    BadSymbolError,
    CorruptIndexError,
    MalformedInputError,
    OutOfRangeError,
    PairingError,
    ProbeBudgetError,
)
from .mmphf import MonotoneHash
from .perm import ShortcutTable, eval_budget
from .pred import PredIndex, budget as scall_budget

MAGIC = b"SSIX"
VERSION = 1

_TAG_CROSS = 1
_TAG_Z = 2
_TAG_MMPHF = 3
_TAG_PRED = 4
_TAG_SHORT = 5
_TAGS = (_TAG_CROSS, _TAG_Z, _TAG_MMPHF, _TAG_PRED, _TAG_SHORT)

_HEADER = struct.Struct("<4sBQIIIQI")
_TABLE_ENTRY = struct.Struct("<IQQ")


def select_budget(t):
    """Maximum probes for one select query."""
    return eval_budget(t)


def rank_budget(t, k):
    """Maximum probes for one rank query."""
    return scall_budget(k) * eval_budget(t)


def max_k(sigma):
    """Largest admissible predecessor sub-sampling rate for this alphabet."""
    return max(1, (sigma - 1).bit_length())


class _Block:
    """Per-block structures; positions are block-local."""

    __slots__ = ("start", "length", "z", "chars", "hashes", "preds", "shortcuts")

    def __init__(self, start, length, z, chars, hashes, preds, shortcuts):
        self.start = start
        self.length = length
        self.z = z
        self.chars = chars  # symbols with n_c >= 1, ascending
        self.hashes = hashes
        self.preds = preds
        self.shortcuts = shortcuts

    def char_base(self, c):
        """Occurrences of symbols < c inside the block (ones before c-th zero)."""
        # Ones before the c-th zero == its position minus the c-1 zeros there.
        return self.z.select0(c) - c + 1 if c else 0

    def char_count(self, c):
        return (self.z.select0(c + 1) - c) - self.char_base(c)


@dataclass
class SpaceReport:
    """Exact stored size per component; total_bits is the serialized size."""

    n: int
    sigma: int
    t: int
    k: int
    z_bits: int
    cross_bits: int
    mmphf_bits: int
    pred_bits: int
    shortcut_bits: int
    shortcut_target_bits: int
    header_bits: int
    directory_bits: int  # in-memory rank directories; rebuilt on load
    total_bits: int

    @property
    def redundancy(self):
        return self.total_bits

    def as_dict(self):
        return {
            "n": self.n,
            "sigma": self.sigma,
            "t": self.t,
            "k": self.k,
            "z_bits": self.z_bits,
            "cross_bits": self.cross_bits,
            "mmphf_bits": self.mmphf_bits,
            "pred_bits": self.pred_bits,
            "shortcut_bits": self.shortcut_bits,
            "shortcut_target_bits": self.shortcut_target_bits,
            "header_bits": self.header_bits,
            "directory_bits": self.directory_bits,
            "r_bits": self.total_bits,
        }

    def lines(self):
        d = self.as_dict()
        out = [f"n={self.n} sigma={self.sigma} t={self.t} k={self.k}"]
        for key in ("z_bits", "cross_bits", "mmphf_bits", "pred_bits",
                    "shortcut_bits", "shortcut_target_bits", "header_bits",
                    "directory_bits", "r_bits"):
            out.append(f"{key}={d[key]}")
        out.append(f"bits_per_symbol={self.total_bits / self.n:.3f}")
        return out


class StringIndex:
    """Systematic rank/select index; stores counts, never symbols."""

    __slots__ = ("n", "sigma", "t", "k", "fingerprint", "cross", "blocks",
                 "_sel_budget", "_rnk_budget", "_paired")

    def __init__(self, n, sigma, t, k, fingerprint, cross, blocks):
        self.n = n
        self.sigma = sigma
        self.t = t
        self.k = k
        self.fingerprint = fingerprint
        self.cross = cross
        self.blocks = blocks
        self._sel_budget = select_budget(t)
        self._rnk_budget = rank_budget(t, k)
        self._paired = None

    # -- construction --------------------------------------------------------

    @classmethod
    def build(cls, text, t, k=1):
        """Index `text` for probe budget t and predecessor sampling rate k."""
        if t < 1:
            raise MalformedInputError(f"probe budget t must be >= 1, got {t}")
        n, sigma = text.n, text.sigma
        if not 1 <= k <= max_k(sigma):
            raise MalformedInputError(
                f"k={k} outside [1, {max_k(sigma)}] for sigma={sigma}"
            )
        symbols = text.symbols()
        nblocks = (n + sigma - 1) // sigma
        blocks = []
        block_counts = []
        for b in range(nblocks):
            start = b * sigma
            length = min(sigma, n - start)
            occ = {}
            for i in range(length):
                occ.setdefault(symbols[start + i], []).append(i)
            chars = sorted(occ)
            counts = [0] * sigma
            for c in chars:
                counts[c] = len(occ[c])
            zb = BitBuilder()
            for c in range(sigma):
                zb.append_run(1, counts[c])
                zb.append_run(0, 1)
            base = [0] * sigma
            acc = 0
            for c in range(sigma):
                base[c] = acc
                acc += counts[c]
            pi = [0] * length
            slot = list(base)
            for i in range(length):
                c = symbols[start + i]
                pi[i] = slot[c]
                slot[c] += 1
            blocks.append(_Block(
                start,
                length,
                zb.build(),
                chars,
                {c: MonotoneHash(occ[c], sigma) for c in chars},
                {c: PredIndex(occ[c], sigma, k) for c in chars},
                ShortcutTable(pi.__getitem__, length, t),
            ))
            block_counts.append(counts)
        cross = []
        for c in range(sigma):
            cb = BitBuilder()
            for b in range(nblocks):
                cb.append_run(1, block_counts[b][c])
                cb.append_run(0, 1)
            cross.append(cb.build())
        return cls(n, sigma, t, k, text.fingerprint, cross, blocks)

    # -- queries ---------------------------------------------------------------

    def check_pairing(self, text):
        """Raise PairingError unless `text` is the sequence this index was built from."""
        if text is self._paired:
            return
        if text.fingerprint != self.fingerprint:
            raise PairingError(
                "text fingerprint does not match the one this index was built from"
            )
        self._paired = text

    def access(self, text, session, i):
        """s[i] at the cost of exactly one probe."""
        self.check_pairing(text)
        before = session.count
        sym = text.access(session, i)
        if session.count - before != 1:
            raise ProbeBudgetError("access must cost exactly one probe")
        return sym

    def select(self, text, session, c, j):
        """Position of the j-th occurrence of c, or -1; <= 2t+1 probes."""
        self.check_pairing(text)
        if not 0 <= c < self.sigma:
            raise BadSymbolError(f"symbol {c} outside alphabet [0, {self.sigma})")
        if j < 1:
            raise OutOfRangeError(f"occurrence ordinal must be >= 1, got {j}")
        before = session.count
        vc = self.cross[c]
        if j > vc.ones:
            return -1
        pos = vc.select1(j)
        b = vc.rank0(pos)
        jp = j - (vc.select0(b) - b + 1) if b else j
        blk = self.blocks[b]
        q = blk.char_base(c) + jp - 1
        local = blk.shortcuts.invert(q, self._evaluator(blk, text, session))
        answer = blk.start + local
        if session.count - before > self._sel_budget:
            raise ProbeBudgetError(
                f"select used {session.count - before} probes; "
                f"budget is {self._sel_budget}"
            )
        return answer

    def rank(self, text, session, c, p):
        """Occurrences of c in s[0, p); <= (3 + ceil(log2 k)) * (2t+1) probes."""
        self.check_pairing(text)
        if not 0 <= c < self.sigma:
            raise BadSymbolError(f"symbol {c} outside alphabet [0, {self.sigma})")
        if not 0 <= p <= self.n:
            raise OutOfRangeError(f"prefix {p} out of range [0, {self.n}]")
        before = session.count
        vc = self.cross[c]
        if p == 0:
            return 0
        b, p_local = divmod(p, self.sigma)
        if b >= len(self.blocks):
            return vc.ones  # p == n on a block boundary
        cross_before = (vc.select0(b) - b + 1) if b else 0
        blk = self.blocks[b]
        if p_local == 0:
            return cross_before
        in_block = 0
        if c in blk.hashes:
            pred = blk.preds[c]
            if p_local >= blk.length:
                in_block = pred.m
            else:
                fetch = self._in_block_select(blk, c, text, session)
                in_block = pred.rank(p_local, fetch)
        answer = cross_before + in_block
        if session.count - before > self._rnk_budget:
            raise ProbeBudgetError(
                f"rank used {session.count - before} probes; "
                f"budget is {self._rnk_budget}"
            )
        return answer

    def _evaluator(self, blk, text, session):
        """Forward permutation evaluation: one probe, then probe-free lookups."""
        start = blk.start
        hashes = blk.hashes
        char_base = blk.char_base

        def pi(x):
            c = text.access(session, start + x)
            return char_base(c) + hashes[c].eval(x)

        return pi

    def _in_block_select(self, blk, c, text, session):
        """S(r): block-local position of the (r+1)-th occurrence of c."""
        base = blk.char_base(c)
        shortcuts = blk.shortcuts
        pi = self._evaluator(blk, text, session)

        def fetch(r):
            return shortcuts.invert(base + r, pi)

        return fetch

    # -- space accounting -------------------------------------------------------

    def space_report(self):
        z_bits = sum(blk.z.nbits for blk in self.blocks)
        cross_bits = sum(v.nbits for v in self.cross)
        mmphf_bits = sum(h.bits() for blk in self.blocks for h in blk.hashes.values())
        pred_bits = sum(p.bits() for blk in self.blocks for p in blk.preds.values())
        shortcut_bits = sum(blk.shortcuts.bits() for blk in self.blocks)
        target_bits = sum(blk.shortcuts.target_bits() for blk in self.blocks)
        directory_bits = (
            sum(blk.z.directory_bits for blk in self.blocks)
            + sum(v.directory_bits for v in self.cross)
            + sum(blk.shortcuts.marked.directory_bits for blk in self.blocks)
        )
        total_bits = 8 * len(self.to_bytes())
        component = z_bits + cross_bits + mmphf_bits + pred_bits + shortcut_bits
        if component > total_bits:
            raise AssertionError("component bits exceed serialized size")
        return SpaceReport(
            n=self.n,
            sigma=self.sigma,
            t=self.t,
            k=self.k,
            z_bits=z_bits,
            cross_bits=cross_bits,
            mmphf_bits=mmphf_bits,
            pred_bits=pred_bits,
            shortcut_bits=shortcut_bits,
            shortcut_target_bits=target_bits,
            header_bits=total_bits - component,
            directory_bits=directory_bits,
            total_bits=total_bits,
        )

    # -- serialization ------------------------------------------------------------

    def to_bytes(self):
        sections = {
            _TAG_CROSS: self._write_cross(),
            _TAG_Z: self._write_z(),
            _TAG_MMPHF: self._write_mmphf(),
            _TAG_PRED: self._write_pred(),
            _TAG_SHORT: self._write_short(),
        }
        header = _HEADER.pack(
            MAGIC, VERSION, self.n, self.sigma, self.t, self.k,
            self.fingerprint, len(_TAGS),
        )
        offset = len(header) + _TABLE_ENTRY.size * len(_TAGS)
        table = bytearray()
        body = bytearray()
        for tag in _TAGS:
            payload = sections[tag]
            table += _TABLE_ENTRY.pack(tag, offset, len(payload))
            body += payload
            offset += len(payload)
        return header + bytes(table) + bytes(body)

    def _write_cross(self):
        bw = BitWriter()
        for v in self.cross:
            bw.write_bv(v)
        return bw.getvalue()

    def _write_z(self):
        bw = BitWriter()
        for blk in self.blocks:
            bw.write_bv(blk.z)
        return bw.getvalue()

    def _write_mmphf(self):
        bw = BitWriter()
        for blk in self.blocks:
            for c in blk.chars:
                blk.hashes[c].write(bw)
        return bw.getvalue()

    def _write_pred(self):
        bw = BitWriter()
        for blk in self.blocks:
            for c in blk.chars:
                blk.preds[c].write(bw)
        return bw.getvalue()

    def _write_short(self):
        bw = BitWriter()
        for blk in self.blocks:
            blk.shortcuts.write(bw)
        return bw.getvalue()

    @classmethod
    def from_bytes(cls, data):
        if len(data) < _HEADER.size:
            raise CorruptIndexError("index header truncated")
        magic, version, n, sigma, t, k, fingerprint, nsections = _HEADER.unpack_from(
            data, 0
        )
        if magic != MAGIC:
            raise CorruptIndexError(f"bad magic {magic!r}")
        if version != VERSION:
            raise CorruptIndexError(f"unsupported version {version}")
        table_end = _HEADER.size + nsections * _TABLE_ENTRY.size
        if len(data) < table_end:
            raise CorruptIndexError("section table truncated")
        sections = {}
        for i in range(nsections):
            tag, off, length = _TABLE_ENTRY.unpack_from(
                data, _HEADER.size + i * _TABLE_ENTRY.size
            )
            if off + length > len(data):
                raise CorruptIndexError(f"section {tag} overruns the file")
            sections[tag] = data[off:off + length]
        for tag in _TAGS:
            if tag not in sections:
                raise CorruptIndexError(f"missing section {tag}")
        nblocks = (n + sigma - 1) // sigma
        lengths = [min(sigma, n - b * sigma) for b in range(nblocks)]

        br = _section_reader(sections[_TAG_Z])
        zs = [br.read_bv(lengths[b] + sigma) for b in range(nblocks)]
        _finish_section(br, sections[_TAG_Z])

        br = _section_reader(sections[_TAG_CROSS])
        cross = [_read_unary(br, nblocks) for _ in range(sigma)]
        _finish_section(br, sections[_TAG_CROSS])

        counts = []
        charsets = []
        for b in range(nblocks):
            z = zs[b]
            cnt = [0] * sigma
            prev = -1
            for c in range(sigma):
                zero = z.select0(c + 1)
                cnt[c] = zero - prev - 1
                prev = zero
            counts.append(cnt)
            charsets.append([c for c in range(sigma) if cnt[c]])

        br = _section_reader(sections[_TAG_MMPHF])
        hashes_per_block = [
            {c: MonotoneHash.read(br, counts[b][c], sigma) for c in charsets[b]}
            for b in range(nblocks)
        ]
        _finish_section(br, sections[_TAG_MMPHF])

        br = _section_reader(sections[_TAG_PRED])
        preds_per_block = [
            {c: PredIndex.read(br, counts[b][c], sigma, k) for c in charsets[b]}
            for b in range(nblocks)
        ]
        _finish_section(br, sections[_TAG_PRED])

        br = _section_reader(sections[_TAG_SHORT])
        shortcuts = [ShortcutTable.read(br, lengths[b], t) for b in range(nblocks)]
        _finish_section(br, sections[_TAG_SHORT])

        blocks = [
            _Block(
                b * sigma, lengths[b], zs[b], charsets[b],
                hashes_per_block[b], preds_per_block[b], shortcuts[b],
            )
            for b in range(nblocks)
        ]
        return cls(n, sigma, t, k, fingerprint, cross, blocks)


def _section_reader(payload):
    return BitReader(payload)


def _finish_section(br, payload):
    consumed = br.bits_consumed
    if (consumed + 7) // 8 != len(payload):
        raise CorruptIndexError("section length disagrees with parsed content")


def _read_unary(br, nzeros):
    """Read a 1^a 0 1^b 0 ... stream until `nzeros` zeros have been seen."""
    builder = BitBuilder()
    seen = 0
    while seen < nzeros:
        bit = br.read(1)
        builder.append(bit)
        if not bit:
            seen += 1
    return builder.build()


def build(text, t, k=1):
    """Convenience wrapper for StringIndex.build."""
    return StringIndex.build(text, t, k)
