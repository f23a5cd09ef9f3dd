"""Plain bitvector with a sampled rank/select directory, plus bit-level I/O.

The directory stores one cumulative popcount per 256-bit superblock and is
rebuilt on load; only the payload is ever serialized.  Queries scan at most
four 64-bit words past a directory entry.
"""

from __future__ import annotations

import struct

from .errors import CorruptIndexError, NotFoundError, OutOfRangeError

WORD = 64
SUPER = 256  # bits per rank-directory entry
_WORDS_PER_SUPER = SUPER // WORD
_WORD_MASK = (1 << WORD) - 1
DIRECTORY_ENTRY_BITS = 32  # accounting width of one directory entry


class BitBuilder:
    """Accumulates bits (optionally in runs) and freezes into an RsBitvector."""

    def __init__(self):
        self._words = []
        self._acc = 0
        self._fill = 0  # bits used in _acc

    def append(self, bit):
        if bit:
            self._acc |= 1 << self._fill
        self._fill += 1
        if self._fill == WORD:
            self._words.append(self._acc)
            self._acc = 0
            self._fill = 0

    def append_run(self, bit, count):
        """Append `count` copies of `bit`."""
        if count < 0:
            raise ValueError("negative run length")
        while count > 0:
            take = min(count, WORD - self._fill)
            if bit:
                self._acc |= ((1 << take) - 1) << self._fill
            self._fill += take
            count -= take
            if self._fill == WORD:
                self._words.append(self._acc)
                self._acc = 0
                self._fill = 0

    def build(self):
        words = list(self._words)
        nbits = len(words) * WORD + self._fill
        if self._fill:
            words.append(self._acc)
        return RsBitvector._from_words(words, nbits)


class RsBitvector:
    """Immutable bit sequence supporting rank and select in both directions."""

    __slots__ = ("_words", "_nbits", "_ranks", "_ones")

    def __init__(self, bits=()):
        b = BitBuilder()
        for bit in bits:
            b.append(1 if bit else 0)
        v = b.build()
        self._words = v._words
        self._nbits = v._nbits
        self._ranks = v._ranks
        self._ones = v._ones

    @classmethod
    def _from_words(cls, words, nbits):
        v = object.__new__(cls)
        v._words = words
        v._nbits = nbits
        v._build_directory()
        return v

    def _build_directory(self):
        # Cumulative rank1 at every SUPER-bit boundary, boundary 0 excluded.
        ranks = []
        acc = 0
        words = self._words
        full = self._nbits // SUPER
        for blk in range(full):
            for w in words[blk * _WORDS_PER_SUPER:(blk + 1) * _WORDS_PER_SUPER]:
                acc += w.bit_count()
            ranks.append(acc)
        tail = 0
        for w in words[full * _WORDS_PER_SUPER:]:
            tail += w.bit_count()
        self._ranks = ranks
        self._ones = acc + tail

    # -- queries ---------------------------------------------------------

    def __len__(self):
        return self._nbits

    @property
    def nbits(self):
        return self._nbits

    @property
    def ones(self):
        return self._ones

    @property
    def zeros(self):
        return self._nbits - self._ones

    def get(self, i):
        if not 0 <= i < self._nbits:
            raise OutOfRangeError(f"bit index {i} out of range [0, {self._nbits})")
        return (self._words[i >> 6] >> (i & 63)) & 1

    def rank1(self, p):
        """Number of 1-bits in positions [0, p)."""
        if not 0 <= p <= self._nbits:
            raise OutOfRangeError(f"rank prefix {p} out of range [0, {self._nbits}]")
        blk = p // SUPER
        acc = self._ranks[blk - 1] if blk else 0
        lo_word = blk * _WORDS_PER_SUPER
        hi_word = p >> 6
        words = self._words
        for wi in range(lo_word, hi_word):
            acc += words[wi].bit_count()
        rem = p & 63
        if rem:
            acc += (words[hi_word] & ((1 << rem) - 1)).bit_count()
        return acc

    def rank0(self, p):
        """Number of 0-bits in positions [0, p)."""
        return p - self.rank1(p)

    def select1(self, j):
        """Zero-based position of the j-th (1-based) 1-bit."""
        if j < 1 or j > self._ones:
            raise NotFoundError(f"no {j}-th one; vector has {self._ones}")
        blk = self._superblock_for(j, ones=True)
        acc = self._ranks[blk - 1] if blk else 0
        wi = blk * _WORDS_PER_SUPER
        words = self._words
        while True:
            cnt = words[wi].bit_count()
            if acc + cnt >= j:
                return wi * WORD + _select_in_word(words[wi], j - acc)
            acc += cnt
            wi += 1

    def select0(self, j):
        """Zero-based position of the j-th (1-based) 0-bit."""
        if j < 1 or j > self.zeros:
            raise NotFoundError(f"no {j}-th zero; vector has {self.zeros}")
        blk = self._superblock_for(j, ones=False)
        acc = (blk * SUPER - self._ranks[blk - 1]) if blk else 0
        wi = blk * _WORDS_PER_SUPER
        words = self._words
        while True:
            # Pad bits past nbits count as ones so they are never selected.
            w = ~words[wi] & _WORD_MASK
            base = wi * WORD
            if base + WORD > self._nbits:
                w &= (1 << max(0, self._nbits - base)) - 1
            cnt = w.bit_count()
            if acc + cnt >= j:
                return base + _select_in_word(w, j - acc)
            acc += cnt
            wi += 1

    def _superblock_for(self, j, ones):
        """Largest superblock whose cumulative count is < j (binary search)."""
        ranks = self._ranks
        lo, hi = 0, len(ranks)
        while lo < hi:
            mid = (lo + hi) // 2
            cum = ranks[mid] if ones else (mid + 1) * SUPER - ranks[mid]
            if cum < j:
                lo = mid + 1
            else:
                hi = mid
        return lo

    # -- accounting and serialization -------------------------------------

    @property
    def directory_bits(self):
        """Reported in-memory overhead of the rank directory."""
        return len(self._ranks) * DIRECTORY_ENTRY_BITS

    def to_bytes(self):
        """64-bit LE bit length, then payload as 64-bit LE words."""
        out = bytearray(struct.pack("<Q", self._nbits))
        for w in self._words:
            out += struct.pack("<Q", w)
        return bytes(out)

    @classmethod
    def from_bytes(cls, data):
        if len(data) < 8:
            raise CorruptIndexError("bitvector header truncated")
        (nbits,) = struct.unpack_from("<Q", data, 0)
        nwords = (nbits + WORD - 1) // WORD
        if len(data) != 8 + 8 * nwords:
            raise CorruptIndexError("bitvector payload length mismatch")
        words = list(struct.unpack_from(f"<{nwords}Q", data, 8))
        if nbits % WORD:
            pad = words[-1] >> (nbits % WORD) if nwords else 0
            if pad:
                raise CorruptIndexError("bitvector padding bits are not zero")
        return cls._from_words(words, nbits)

    def __eq__(self, other):
        if not isinstance(other, RsBitvector):
            return NotImplemented
        return self._nbits == other._nbits and self._words == other._words

    def __hash__(self):
        return hash((self._nbits, tuple(self._words)))

    def __repr__(self):
        return f"RsBitvector(len={self._nbits}, ones={self._ones})"


def _select_in_word(word, r):
    """Position of the r-th (1-based) set bit inside a 64-bit word."""
    for byte in range(8):
        chunk = (word >> (byte * 8)) & 0xFF
        cnt = chunk.bit_count()
        if cnt >= r:
            pos = byte * 8
            while True:
                if chunk & 1:
                    r -= 1
                    if r == 0:
                        return pos
                chunk >>= 1
                pos += 1
        r -= cnt
    raise AssertionError("select ran past word")  # caller guarantees presence


class BitWriter:
    """Packs fixed-width integers LSB-first into a byte stream."""

    def __init__(self):
        self._buf = bytearray()
        self._acc = 0
        self._fill = 0
        self._nbits = 0

    @property
    def bit_length(self):
        return self._nbits

    def write(self, value, width):
        if width < 0 or value < 0 or (width < value.bit_length()):
            raise ValueError(f"value {value} does not fit in {width} bits")
        self._acc |= value << self._fill
        self._fill += width
        self._nbits += width
        while self._fill >= 8:
            self._buf.append(self._acc & 0xFF)
            self._acc >>= 8
            self._fill -= 8

    def write_bv(self, bv):
        """Append exactly bv.nbits payload bits (no header, no padding)."""
        nbits = bv.nbits
        words = bv._words
        full = nbits // WORD
        for wi in range(full):
            self.write(words[wi], WORD)
        rem = nbits & 63
        if rem:
            self.write(words[full] & ((1 << rem) - 1), rem)

    def getvalue(self):
        out = bytes(self._buf)
        if self._fill:
            out += bytes([self._acc & 0xFF])
        return out


class BitReader:
    """Reads back what BitWriter wrote; overruns raise CorruptIndexError."""

    def __init__(self, data):
        self._data = data
        self._pos = 0  # bit cursor

    @property
    def bits_consumed(self):
        return self._pos

    def read(self, width):
        end = self._pos + width
        if end > len(self._data) * 8:
            raise CorruptIndexError("bit stream truncated")
        value = 0
        got = 0
        pos = self._pos
        while got < width:
            byte = self._data[pos >> 3]
            offset = pos & 7
            take = min(8 - offset, width - got)
            value |= ((byte >> offset) & ((1 << take) - 1)) << got
            got += take
            pos += take
        self._pos = end
        return value

    def read_bv(self, nbits):
        words = []
        full = nbits // WORD
        for _ in range(full):
            words.append(self.read(WORD))
        rem = nbits & 63
        if rem:
            words.append(self.read(rem))
        return RsBitvector._from_words(words, nbits)

    def align_to_byte(self):
        rem = self._pos & 7
        if rem:
            if self.read(8 - rem) != 0:
                raise CorruptIndexError("nonzero padding bits")
