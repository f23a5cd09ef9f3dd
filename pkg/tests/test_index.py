import random
from itertools import product

import pytest

from strindex import (
    BadSymbolError,
    CorruptIndexError,
    MalformedInputError,
    OutOfRangeError,
    PairingError,
    ProbeSession,
    ProbedText,
    StringIndex,
    build,
    max_k,
    rank_budget,
    select_budget,
)
from conftest import brute_rank, brute_select, make_random_text, positions_of


def bits_of(v):
    return "".join(str(v.get(i)) for i in range(v.nbits))


def test_build_block_decomposition(sample_text):
    ix = build(sample_text, t=1, k=1)
    assert len(ix.blocks) == 2
    assert bits_of(ix.blocks[0].z) == "101010"
    assert bits_of(ix.blocks[1].z) == "110100"


def test_single_block_cross_vectors():
    text = ProbedText([2, 0, 1, 2], 4)  # n == sigma: one block
    ix = build(text, t=1)
    assert len(ix.blocks) == 1
    assert bits_of(ix.cross[0]) == "10"
    assert bits_of(ix.cross[1]) == "10"
    assert bits_of(ix.cross[2]) == "110"
    assert bits_of(ix.cross[3]) == "0"


def test_absent_character_short_circuits():
    text = ProbedText([0, 0, 0, 0], 2)
    ix = build(text, t=3)
    for blk in ix.blocks:
        assert 1 not in blk.hashes and 1 not in blk.preds
    sess = ProbeSession()
    assert ix.select(text, sess, 1, 1) == -1
    assert sess.count == 0
    sess = ProbeSession()
    assert ix.rank(text, sess, 1, 4) == 0
    assert sess.count == 0


def test_access(sample_text):
    ix = build(sample_text, t=1)
    sess = ProbeSession()
    assert ix.access(sample_text, sess, 4) == 0
    assert sess.count == 1
    assert ix.access(sample_text, sess, 0) == 1
    assert sess.count == 2
    with pytest.raises(OutOfRangeError):
        ix.access(sample_text, sess, 6)
    assert sess.count == 2


def test_select_examples(sample_text):
    ix = build(sample_text, t=1)
    sess = ProbeSession()
    assert ix.select(sample_text, sess, 0, 2) == 4
    assert sess.count <= select_budget(1)
    sess = ProbeSession()
    assert ix.select(sample_text, sess, 2, 2) == -1
    assert sess.count == 0
    two = ProbedText([0, 0], 2)
    assert build(two, t=1).select(two, ProbeSession(), 0, 1) == 0


def test_rank_examples(sample_text):
    ix = build(sample_text, t=1)
    assert ix.rank(sample_text, ProbeSession(), 0, 4) == 1
    for c in range(3):
        assert ix.rank(sample_text, ProbeSession(), c, 0) == 0
    assert ix.rank(sample_text, ProbeSession(), 0, 6) == 3
    total = sum(ix.rank(sample_text, ProbeSession(), c, 6) for c in range(3))
    assert total == 6


def test_query_domain_errors(sample_text):
    ix = build(sample_text, t=1)
    with pytest.raises(BadSymbolError):
        ix.select(sample_text, ProbeSession(), 3, 1)
    with pytest.raises(BadSymbolError):
        ix.rank(sample_text, ProbeSession(), -1, 2)
    with pytest.raises(OutOfRangeError):
        ix.rank(sample_text, ProbeSession(), 0, 7)
    with pytest.raises(OutOfRangeError):
        ix.select(sample_text, ProbeSession(), 0, 0)


def test_build_parameter_validation(sample_text):
    with pytest.raises(MalformedInputError):
        build(sample_text, t=0)
    with pytest.raises(MalformedInputError):
        build(sample_text, t=1, k=max_k(sample_text.sigma) + 1)
    with pytest.raises(MalformedInputError):
        build(sample_text, t=1, k=0)


def test_exhaustive_small_strings():
    for sigma in (2, 3):
        for n in range(sigma, 6):
            for tup in product(range(sigma), repeat=n):
                text = ProbedText(tup, sigma)
                occ = positions_of(text)
                for t, k in ((1, 1), (2, 1), (3, 2)):
                    if k > max_k(sigma):
                        continue
                    ix = build(text, t, k)
                    for c in range(sigma):
                        for p in range(n + 1):
                            sess = ProbeSession()
                            assert ix.rank(text, sess, c, p) == brute_rank(occ, c, p)
                            assert sess.count <= rank_budget(t, k)
                        for j in range(1, n + 2):
                            sess = ProbeSession()
                            assert ix.select(text, sess, c, j) == brute_select(occ, c, j)
                            assert sess.count <= select_budget(t)


def test_randomized_equivalence_and_budgets():
    rng = random.Random(20)
    for sigma, t, k in ((16, 2, 1), (64, 4, 2), (256, 7, 3)):
        text = make_random_text(2048, sigma, seed=sigma + t)
        occ = positions_of(text)
        ix = build(text, t, k)
        for _ in range(300):
            c = rng.randrange(sigma)
            p = rng.randrange(text.n + 1)
            j = rng.randrange(1, text.n + 1)
            sess = ProbeSession()
            assert ix.rank(text, sess, c, p) == brute_rank(occ, c, p)
            assert sess.count <= rank_budget(t, k)
            sess = ProbeSession()
            assert ix.select(text, sess, c, j) == brute_select(occ, c, j)
            assert sess.count <= select_budget(t)
            sess = ProbeSession()
            i = rng.randrange(text.n)
            assert ix.access(text, sess, i) == text.symbols()[i]
            assert sess.count == 1


def test_galois_identities():
    text = make_random_text(1000, 16, seed=77)
    occ = positions_of(text)
    ix = build(text, t=2)
    for c in range(16):
        total = len(occ.get(c, ()))
        for j in range(1, total + 1):
            pos = ix.select(text, ProbeSession(), c, j)
            assert pos != -1
            assert text.symbols()[pos] == c
            assert ix.rank(text, ProbeSession(), c, pos) == j - 1
        for p in (0, 1, 500, 999, 1000):
            r = ix.rank(text, ProbeSession(), c, p)
            if r > 0:
                assert ix.select(text, ProbeSession(), c, r) < p
            nxt = ix.select(text, ProbeSession(), c, r + 1)
            if nxt != -1:
                assert nxt >= p


def test_permutation_round_trip_per_block():
    text = make_random_text(600, 32, seed=5)
    ix = build(text, t=3)
    symbols = text.symbols()
    for blk in ix.blocks:
        seen = {}
        base = {}
        acc = 0
        counts = [0] * text.sigma
        for i in range(blk.length):
            counts[symbols[blk.start + i]] += 1
        for c in range(text.sigma):
            base[c] = acc
            acc += counts[c]
        pi = []
        for i in range(blk.length):
            c = symbols[blk.start + i]
            pi.append(base[c] + seen.get(c, 0))
            seen[c] = seen.get(c, 0) + 1
        for i in range(blk.length):
            assert blk.shortcuts.invert(pi[i], pi.__getitem__) == i


def test_serialization_round_trip_and_reload_answers():
    text = make_random_text(3000, 64, seed=8)
    occ = positions_of(text)
    ix = build(text, t=4, k=2)
    blob = ix.to_bytes()
    back = StringIndex.from_bytes(blob)
    assert back.to_bytes() == blob
    rng = random.Random(4)
    for _ in range(200):
        c = rng.randrange(64)
        p = rng.randrange(3001)
        j = rng.randrange(1, 200)
        s1, s2 = ProbeSession(), ProbeSession()
        assert ix.rank(text, s1, c, p) == back.rank(text, s2, c, p) == brute_rank(occ, c, p)
        assert s1.count == s2.count
        s1, s2 = ProbeSession(), ProbeSession()
        assert ix.select(text, s1, c, j) == back.select(text, s2, c, j) == brute_select(occ, c, j)
        assert s1.count == s2.count


def test_deserialization_errors():
    text = make_random_text(100, 8, seed=1)
    blob = build(text, t=2).to_bytes()
    with pytest.raises(CorruptIndexError):
        StringIndex.from_bytes(blob[:10])
    with pytest.raises(CorruptIndexError):
        StringIndex.from_bytes(b"XXXX" + blob[4:])
    with pytest.raises(CorruptIndexError):
        StringIndex.from_bytes(blob[:4] + b"\x09" + blob[5:])  # bad version
    with pytest.raises(CorruptIndexError):
        StringIndex.from_bytes(blob[:-3])  # truncated section


def test_pairing_mismatch_detected_at_query_time():
    text = make_random_text(100, 8, seed=2)
    other = make_random_text(100, 8, seed=3)
    ix = build(text, t=2)
    with pytest.raises(PairingError):
        ix.rank(other, ProbeSession(), 0, 10)
    with pytest.raises(PairingError):
        ix.select(other, ProbeSession(), 0, 1)
    with pytest.raises(PairingError):
        ix.access(other, ProbeSession(), 0)


def test_build_is_deterministic():
    text = make_random_text(500, 16, seed=6)
    assert build(text, t=3, k=2).to_bytes() == build(text, t=3, k=2).to_bytes()


def test_space_report_components_sum():
    text = make_random_text(2000, 32, seed=7)
    ix = build(text, t=2)
    rep = ix.space_report()
    parts = (rep.z_bits + rep.cross_bits + rep.mmphf_bits + rep.pred_bits
             + rep.shortcut_bits + rep.header_bits)
    assert parts == rep.total_bits
    assert rep.total_bits == 8 * len(ix.to_bytes())
    assert rep.shortcut_target_bits <= rep.shortcut_bits
    # unary scaffolding sizes are fully determined by (n, sigma, #blocks)
    nblocks = len(ix.blocks)
    assert rep.cross_bits == text.n + text.sigma * nblocks
    assert rep.z_bits == text.n + text.sigma * nblocks
    assert sum(v.ones for v in ix.cross) == text.n


def test_rank_at_exact_text_end_multiple_of_sigma():
    text = ProbedText([0, 1, 1, 0], 2)  # n divisible by sigma
    ix = build(text, t=1)
    assert ix.rank(text, ProbeSession(), 1, 4) == 2
    assert ix.rank(text, ProbeSession(), 0, 4) == 2
