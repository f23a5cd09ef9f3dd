"""Monotone minimal perfect hashing over a sorted key set.

Maps every member of a strictly increasing key set T over universe [u] to its
rank in T without storing the keys and without ever touching the indexed
sequence; the result for non-members is arbitrary but in range.  Layout:
every beta-th key is kept verbatim as a bucket separator (beta ~ log2 u), and
each bucket of at most beta keys stores just enough branching structure to
tell its members apart:

  * one key      - nothing at all (rank offset is 0);
  * two keys     - the highest bit position where they differ, plus the
                   smaller key's bit there;
  * three+ keys  - a compacted binary trie over the keys, recorded as a
                   preorder shape bitstream with per-node skip lengths; a
                   member's offset is the leaf reached by descending on its
                   own bits (no key material is needed for members).

Evaluation is a binary search over separators plus one short descent.
"""

from __future__ import annotations

import struct
from bisect import bisect_right

from .bits import BitReader, BitWriter
from .errors import CorruptIndexError, MalformedInputError

# Audit constants for the size bound checked by tests:
# bits(h) <= SIZE_C * m * log2(log2(u)) + SIZE_CPRIME * (m / beta) * log2(u).
SIZE_C = 8
SIZE_CPRIME = 4

STANDALONE_HEADER_BITS = 128  # u64 m + u64 u

_EMPTY = 0
_PAIR = 1
_TRIE = 2


def _width(u):
    """Bit width of keys drawn from [u]; also the sampling rate beta."""
    return max(1, (u - 1).bit_length())


class _Trie:
    """Flat compacted binary trie; children >= 0 are nodes, ~child is a leaf rank."""

    __slots__ = ("branch", "left", "right")

    def __init__(self, keys, w):
        branch, left, right = [], [], []

        def rec(lo, hi, depth):
            if hi - lo == 1:
                return ~lo
            xor = keys[lo] ^ keys[hi - 1]
            d = w - xor.bit_length()
            node = len(branch)
            branch.append(d)
            left.append(0)
            right.append(0)
            # First key whose bit at d is 1; keys share all bits above d.
            a, b = lo + 1, hi
            while a < b:
                mid = (a + b) // 2
                if (keys[mid] >> (w - 1 - d)) & 1:
                    b = mid
                else:
                    a = mid + 1
            left[node] = rec(lo, a, d + 1)
            right[node] = rec(a, hi, d + 1)
            return node

        rec(0, len(keys), 0)
        self.branch = branch
        self.left = left
        self.right = right

    def descend(self, x, w):
        node = 0
        branch, left, right = self.branch, self.left, self.right
        while node >= 0:
            if (x >> (w - 1 - branch[node])) & 1:
                node = right[node]
            else:
                node = left[node]
        return ~node


class MonotoneHash:
    """Rank-of-member evaluator for a fixed sorted key set; zero probes."""

    __slots__ = ("m", "u", "_w", "_beta", "_samples", "_buckets")

    def __init__(self, keys, u):
        keys = list(keys)
        if u < 1:
            raise MalformedInputError(f"universe size must be positive, got {u}")
        prev = -1
        for k in keys:
            if k <= prev:
                raise MalformedInputError("keys must be strictly increasing")
            prev = k
        if keys and keys[-1] >= u:
            raise MalformedInputError(f"key {keys[-1]} outside universe [0, {u})")
        self.m = len(keys)
        self.u = u
        self._w = _width(u)
        self._beta = self._w
        self._samples = [keys[r] for r in range(self._beta, self.m, self._beta)]
        self._buckets = [
            self._make_bucket(keys[lo:lo + self._beta])
            for lo in range(0, self.m, self._beta)
        ]

    def _make_bucket(self, bkeys):
        if len(bkeys) == 1:
            return (_EMPTY, None)
        if len(bkeys) == 2:
            d = self._w - (bkeys[0] ^ bkeys[1]).bit_length()
            v = (bkeys[0] >> (self._w - 1 - d)) & 1
            return (_PAIR, (d, v))
        return (_TRIE, _Trie(bkeys, self._w))

    # -- evaluation --------------------------------------------------------

    def eval(self, x):
        """Rank of x in the key set when x is a member; arbitrary otherwise."""
        if self.m == 0:
            return 0
        j = bisect_right(self._samples, x)
        kind, data = self._buckets[j]
        if kind == _EMPTY:
            offset = 0
        elif kind == _PAIR:
            d, v = data
            offset = 0 if ((x >> (self._w - 1 - d)) & 1) == v else 1
        else:
            offset = data.descend(x, self._w)
        return j * self._beta + offset

    # -- size accounting ---------------------------------------------------

    def bits(self):
        """Exact payload size in bits; equals what write() emits."""
        w = self._w
        sw = max(1, (w - 1).bit_length())
        total = len(self._samples) * w
        for kind, data in self._buckets:
            if kind == _PAIR:
                total += sw + 1
            elif kind == _TRIE:
                nleaves = len(data.branch) + 1
                total += (2 * nleaves - 1) + len(data.branch) * sw
        return total

    # -- serialization -----------------------------------------------------

    def write(self, bw):
        """Emit the payload; m and u are carried by the container."""
        w = self._w
        sw = max(1, (w - 1).bit_length())
        for s in self._samples:
            bw.write(s, w)
        for kind, data in self._buckets:
            if kind == _PAIR:
                d, v = data
                bw.write(d, sw)
                bw.write(v, 1)
            elif kind == _TRIE:
                self._write_trie(bw, data, sw)

    @staticmethod
    def _write_trie(bw, trie, sw):
        def rec(node, depth):
            if node < 0:
                bw.write(0, 1)
                return
            bw.write(1, 1)
            bw.write(trie.branch[node] - depth, sw)
            rec(trie.left[node], trie.branch[node] + 1)
            rec(trie.right[node], trie.branch[node] + 1)

        rec(0, 0)

    @classmethod
    def read(cls, br, m, u):
        """Rebuild from a payload previously produced by write()."""
        h = object.__new__(cls)
        h.m = m
        h.u = u
        h._w = _width(u)
        h._beta = h._w
        w, beta = h._w, h._beta
        sw = max(1, (w - 1).bit_length())
        nsamples = max(0, (m + beta - 1) // beta - 1)
        h._samples = [br.read(w) for _ in range(nsamples)]
        h._buckets = []
        for lo in range(0, m, beta):
            size = min(beta, m - lo)
            if size == 1:
                h._buckets.append((_EMPTY, None))
            elif size == 2:
                d = br.read(sw)
                v = br.read(1)
                h._buckets.append((_PAIR, (d, v)))
            else:
                h._buckets.append((_TRIE, cls._read_trie(br, size, sw, w)))
        return h

    @staticmethod
    def _read_trie(br, nleaves, sw, w):
        trie = object.__new__(_Trie)
        trie.branch, trie.left, trie.right = [], [], []
        leaves = 0

        def rec(depth):
            nonlocal leaves
            if not br.read(1):
                leaf = leaves
                leaves += 1
                return ~leaf
            d = depth + br.read(sw)
            if d >= w:
                raise CorruptIndexError("trie branch depth exceeds key width")
            node = len(trie.branch)
            trie.branch.append(d)
            trie.left.append(0)
            trie.right.append(0)
            trie.left[node] = rec(d + 1)
            trie.right[node] = rec(d + 1)
            return node

        root = rec(0)
        if leaves != nleaves or (root >= 0) != (nleaves > 1):
            raise CorruptIndexError("trie shape disagrees with bucket size")
        return trie

    def to_bytes(self):
        bw = BitWriter()
        self.write(bw)
        return struct.pack("<QQ", self.m, self.u) + bw.getvalue()

    @classmethod
    def from_bytes(cls, data):
        if len(data) < 16:
            raise CorruptIndexError("monotone hash header truncated")
        m, u = struct.unpack_from("<QQ", data, 0)
        return cls.read(BitReader(data[16:]), m, u)
