import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strindex import MalformedInputError, MonotoneHash
from strindex.bits import BitReader, BitWriter
from strindex.mmphf import SIZE_C, SIZE_CPRIME, STANDALONE_HEADER_BITS, _width


def test_two_keys():
    h = MonotoneHash([1, 2], 3)
    assert h.eval(1) == 0
    assert h.eval(2) == 1


def test_empty_set():
    h = MonotoneHash([], 8)
    assert h.bits() == 0
    assert 0 <= h.eval(5) <= 0
    assert len(h.to_bytes()) * 8 == STANDALONE_HEADER_BITS


def test_identity_on_full_universe():
    h = MonotoneHash(range(8), 8)
    for i in range(8):
        assert h.eval(i) == i


def test_hand_ranks():
    assert MonotoneHash([0, 3], 6).eval(3) == 1
    assert MonotoneHash([5], 8).eval(5) == 0
    assert MonotoneHash([1, 2], 3).eval(1) == 0


def test_eval_in_range_for_non_members():
    h = MonotoneHash([3, 9, 17, 40, 41], 64)
    for x in range(64):
        assert 0 <= h.eval(x) < 5


@settings(deadline=None, max_examples=300)
@given(st.data())
def test_member_rank_identity(data):
    u = data.draw(st.integers(min_value=1, max_value=4096))
    keys = data.draw(
        st.lists(st.integers(min_value=0, max_value=u - 1), unique=True, max_size=200)
    )
    keys.sort()
    h = MonotoneHash(keys, u)
    for rank, key in enumerate(keys):
        assert h.eval(key) == rank


def test_build_rejects_malformed():
    with pytest.raises(MalformedInputError):
        MonotoneHash([2, 1], 4)
    with pytest.raises(MalformedInputError):
        MonotoneHash([1, 1], 4)
    with pytest.raises(MalformedInputError):
        MonotoneHash([1, 9], 8)


def test_rebuild_is_byte_identical():
    keys = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43]
    a = MonotoneHash(keys, 64).to_bytes()
    b = MonotoneHash(keys, 64).to_bytes()
    assert a == b


def test_serialization_round_trip():
    keys = [1, 4, 6, 7, 100, 1000, 4095]
    h = MonotoneHash(keys, 4096)
    blob = h.to_bytes()
    g = MonotoneHash.from_bytes(blob)
    assert g.to_bytes() == blob
    for rank, key in enumerate(keys):
        assert g.eval(key) == rank


def test_embedded_write_read_round_trip():
    keys = list(range(0, 300, 7))
    h = MonotoneHash(keys, 512)
    bw = BitWriter()
    h.write(bw)
    assert bw.bit_length == h.bits()
    g = MonotoneHash.read(BitReader(bw.getvalue()), h.m, h.u)
    for rank, key in enumerate(keys):
        assert g.eval(key) == rank


def test_bits_meet_audit_bound():
    m, u = 64, 2**16
    keys = list(range(0, m * 1000, 1000))
    h = MonotoneHash(keys, u)
    beta = _width(u)
    bound = SIZE_C * m * math.log2(math.log2(u)) + SIZE_CPRIME * (m / beta) * math.log2(u)
    assert h.bits() <= bound


def test_bits_grow_roughly_linearly():
    u = 2**16
    import random

    rng = random.Random(42)
    for m in (64, 128, 256):
        small = sorted(rng.sample(range(u), m))
        large = sorted(rng.sample(range(u), 2 * m))
        ratio = MonotoneHash(large, u).bits() / MonotoneHash(small, u).bits()
        assert 1.5 <= ratio <= 2.5


def test_tiny_universe():
    h = MonotoneHash([0, 1], 2)
    assert h.eval(0) == 0
    assert h.eval(1) == 1
    h = MonotoneHash([1], 2)
    assert h.eval(1) == 0
