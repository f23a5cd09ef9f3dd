import struct

import pytest

from strindex import (
    EmptyTextError,
    MalformedInputError,
    OutOfRangeError,
    ProbeSession,
    ProbedText,
    SigmaExceedsLengthError,
    load,
)


def test_load_raw8_with_sigma():
    text = load(bytes([1, 0, 2, 1, 0, 0]), "raw8", 3)
    assert text.n == 6
    assert text.sigma == 3
    assert text.symbols() == (1, 0, 2, 1, 0, 0)


def test_load_sigma_clamped_to_two():
    text = load(bytes([0, 0]), "raw8")
    assert text.n == 2
    assert text.sigma == 2


def test_load_rejects_symbol_outside_alphabet():
    with pytest.raises(MalformedInputError, match="position 0"):
        load(bytes([5]), "raw8", 3)
    with pytest.raises(MalformedInputError, match="position 2"):
        load(bytes([0, 1, 7, 1]), "raw8", 4)


def test_load_rejects_empty():
    with pytest.raises(EmptyTextError):
        load(b"", "raw8")
    with pytest.raises(EmptyTextError):
        load(b"   ", "tokens")


def test_load_rejects_sigma_exceeding_length():
    with pytest.raises(SigmaExceedsLengthError):
        load(bytes([0, 1]), "raw8", 5)
    # derived sigma can exceed n as well
    with pytest.raises(SigmaExceedsLengthError):
        load(bytes([9]), "raw8")


def test_load_u32le():
    payload = struct.pack("<4I", 3, 0, 1, 2)
    text = load(payload, "u32le")
    assert text.symbols() == (3, 0, 1, 2)
    assert text.sigma == 4


def test_load_u32le_bad_length():
    with pytest.raises(MalformedInputError, match="multiple of 4"):
        load(b"\x01\x02\x03", "u32le")


def test_load_tokens():
    text = load(b" 1 0 2\n1\t0 0 ", "tokens", 3)
    assert text.symbols() == (1, 0, 2, 1, 0, 0)


def test_load_tokens_errors():
    with pytest.raises(MalformedInputError, match="position 1"):
        load(b"0 x 1", "tokens")
    with pytest.raises(MalformedInputError, match="negative"):
        load(b"0 -1", "tokens")


def test_load_unknown_format():
    with pytest.raises(MalformedInputError):
        load(b"\x00\x00", "raw16")


def test_access_counts_probes(sample_text):
    sess = ProbeSession()
    assert sample_text.access(sess, 2) == 2
    assert sess.count == 1
    assert sample_text.access(sess, 0) == 1
    assert sample_text.access(sess, 0) == 1  # no caching: both charged
    assert sess.count == 3


def test_access_sessions_are_independent(sample_text):
    a, b = ProbeSession(), ProbeSession()
    sample_text.access(a, 1)
    assert (a.count, b.count) == (1, 0)
    sample_text.access(b, 1)
    sample_text.access(b, 2)
    assert (a.count, b.count) == (1, 2)


def test_access_out_of_range_is_uncharged(sample_text):
    sess = ProbeSession()
    with pytest.raises(OutOfRangeError):
        sample_text.access(sess, 6)
    with pytest.raises(OutOfRangeError):
        sample_text.access(sess, -1)
    assert sess.count == 0


def test_access_deterministic_across_sessions(sample_text):
    values = [sample_text.access(ProbeSession(), i) for i in range(sample_text.n)]
    again = [sample_text.access(ProbeSession(), i) for i in range(sample_text.n)]
    assert values == again == [1, 0, 2, 1, 0, 0]


def test_fingerprint_is_stable_and_discriminating():
    a = ProbedText([1, 0, 2, 1, 0, 0], 3)
    b = ProbedText([1, 0, 2, 1, 0, 0], 3)
    c = ProbedText([1, 0, 2, 1, 0, 1], 3)
    d = ProbedText([1, 0, 2, 1, 0, 0], 4)
    assert a.fingerprint == b.fingerprint
    assert a.fingerprint != c.fingerprint
    assert a.fingerprint != d.fingerprint


def test_constructor_validates():
    with pytest.raises(MalformedInputError):
        ProbedText([0, 3], 3)
    with pytest.raises(EmptyTextError):
        ProbedText([], 2)
