"""Shared helpers: reference answers computed independently of the index."""

import random
from bisect import bisect_left

import pytest

from strindex import ProbedText


def make_random_text(n, sigma, seed):
    rng = random.Random(seed)
    return ProbedText([rng.randrange(sigma) for _ in range(n)], sigma)


def positions_of(text):
    """Sorted occurrence positions per symbol; the brute-force ground truth."""
    occ = {}
    for i, sym in enumerate(text.symbols()):
        occ.setdefault(sym, []).append(i)
    return occ


def brute_rank(occ, c, p):
    lst = occ.get(c)
    return bisect_left(lst, p) if lst else 0


def brute_select(occ, c, j):
    lst = occ.get(c, ())
    return lst[j - 1] if 1 <= j <= len(lst) else -1


@pytest.fixture
def sample_text():
    """The six-symbol worked example used throughout the module tests."""
    return ProbedText([1, 0, 2, 1, 0, 0], 3)
