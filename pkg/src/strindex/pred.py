"""Predecessor counting over a set reachable only through a paid accessor.

PredIndex answers R(p) = |{x in T : x < p}| for T a sorted set of in-block
positions, where member values are fetched via S(rank) at a per-call cost.
The accessor-call budget per query is BUDGET(k) = 3 + ceil(log2 k), enforced
on every call.

Layout for m = |T| members over universe [sigma]:

  * m <= DIRECT_LIMIT: nothing is stored; a plain binary search over S
    resolves R(p) in at most 3 calls.
  * otherwise: every g-th member (g ~ log2 sigma) is stored verbatim in a
    top array that is binary searched for free; inside the resulting bucket
    every k-th member is sampled.  Buckets with at most two samples keep
    them verbatim; larger ones use a blind Patricia trie that stores only
    skip lengths and subtree leaf ranges, never keys.  The trie descends on
    the query's own bits, fetches the single reached key to learn the true
    divergence depth, and re-reads the recorded path - one S call in all.
    A final binary search over the at most k-1 members between neighbouring
    samples finishes the count.
"""

from __future__ import annotations

from bisect import bisect_left

from .errors import MalformedInputError, ProbeBudgetError

#: Largest member count answered by storing nothing at all: a binary search
#: over m + 1 outcomes costs ceil(log2(m + 1)) <= 3 accessor calls.
DIRECT_LIMIT = 7

#: Payload bits reported for an empty or direct-searched set.
EMPTY_PRED_BITS = 0

_EXPLICIT = 0
_TRIE = 1


def budget(k):
    """Hard per-query accessor-call budget."""
    return 3 + max(0, (k - 1).bit_length())


def _width(sigma):
    return max(1, (sigma - 1).bit_length())


class BlindTrie:
    """Compacted binary trie over w-bit keys storing no key material.

    Internal nodes carry their branching bit depth and the leaf-rank range of
    their subtree; leaves are implicit in-order ranks 0, 1, 2, ...
    """

    __slots__ = ("nleaves", "w", "root", "branch", "left", "right", "minleaf", "maxleaf")

    def __init__(self, keys, w):
        keys = list(keys)
        if len(keys) < 1:
            raise MalformedInputError("blind trie needs at least one key")
        self.nleaves = len(keys)
        self.w = w
        branch, left, right, minleaf, maxleaf = [], [], [], [], []

        def rec(lo, hi, depth):
            if hi - lo == 1:
                return ~lo
            xor = keys[lo] ^ keys[hi - 1]
            d = w - xor.bit_length()
            node = len(branch)
            branch.append(d)
            left.append(0)
            right.append(0)
            minleaf.append(lo)
            maxleaf.append(hi - 1)
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

        self.root = rec(0, len(keys), 0)
        self.branch = branch
        self.left = left
        self.right = right
        self.minleaf = minleaf
        self.maxleaf = maxleaf

    def predecessor(self, p, fetch):
        """Leaf rank of the largest key < p, or None; exactly one fetch.

        Blind two-pass search: descend on p's branching bits, fetch the key
        of the reached leaf, locate the true divergence depth, then pick the
        subtree straddling that depth.  All keys below it compare to p the
        same way, so its stored leaf range settles the answer.
        """
        w = self.w
        branch, left, right = self.branch, self.left, self.right
        node = self.root
        path = []
        while node >= 0:
            path.append(node)
            if (p >> (w - 1 - branch[node])) & 1:
                node = right[node]
            else:
                node = left[node]
        leaf = ~node
        y = fetch(leaf)
        if y == p:
            return leaf - 1 if leaf else None
        lcp = w - (p ^ y).bit_length()
        vee = None
        for cand in path:
            if branch[cand] > lcp:
                vee = cand
                break
        if vee is None:
            lo_leaf = hi_leaf = leaf  # divergence inside the leaf edge
        else:
            lo_leaf, hi_leaf = self.minleaf[vee], self.maxleaf[vee]
        if (p >> (w - 1 - lcp)) & 1:
            return hi_leaf  # whole subtree sits below p
        return lo_leaf - 1 if lo_leaf else None  # whole subtree sits above p

    def write(self, bw, skip_width, rank_width):
        def rec(node, depth):
            if node < 0:
                bw.write(0, 1)
                return
            bw.write(1, 1)
            bw.write(self.branch[node] - depth, skip_width)
            bw.write(self.minleaf[node], rank_width)
            bw.write(self.maxleaf[node], rank_width)
            rec(self.left[node], self.branch[node] + 1)
            rec(self.right[node], self.branch[node] + 1)

        rec(self.root, 0)

    @classmethod
    def read(cls, br, nleaves, w, skip_width, rank_width):
        t = object.__new__(cls)
        t.nleaves = nleaves
        t.w = w
        t.branch, t.left, t.right, t.minleaf, t.maxleaf = [], [], [], [], []
        leaves = 0

        def rec(depth):
            nonlocal leaves
            if not br.read(1):
                leaf = leaves
                leaves += 1
                return ~leaf
            d = depth + br.read(skip_width)
            node = len(t.branch)
            t.branch.append(d)
            t.left.append(0)
            t.right.append(0)
            t.minleaf.append(br.read(rank_width))
            t.maxleaf.append(br.read(rank_width))
            t.left[node] = rec(d + 1)
            t.right[node] = rec(d + 1)
            return node

        t.root = rec(0)
        if leaves != nleaves:
            raise MalformedInputError("trie leaf count disagrees with sample count")
        return t

    def bits(self, skip_width, rank_width):
        ninternal = len(self.branch)
        return (2 * self.nleaves - 1) + ninternal * (skip_width + 2 * rank_width)


class PredIndex:
    """R(p) over a sorted member set, fetching members through S(rank)."""

    __slots__ = ("m", "sigma", "k", "g", "_w", "_top", "_buckets", "_budget")

    def __init__(self, members, sigma, k):
        members = list(members)
        g = _width(sigma)
        if not 1 <= k <= g:
            raise MalformedInputError(f"k={k} outside [1, {g}]")
        prev = -1
        for x in members:
            if x <= prev:
                raise MalformedInputError("members must be strictly increasing")
            prev = x
        if members and members[-1] >= sigma:
            raise MalformedInputError(f"member {members[-1]} >= sigma {sigma}")
        self.m = len(members)
        self.sigma = sigma
        self.k = k
        self.g = g
        self._w = _width(sigma)
        self._budget = budget(k)
        if self.m <= DIRECT_LIMIT:
            self._top = None
            self._buckets = None
            return
        self._top = members[::g]
        self._buckets = []
        for base in range(0, self.m, g):
            sampled = members[base:min(base + g, self.m):k]
            if len(sampled) <= 2:
                self._buckets.append((_EXPLICIT, sampled))
            else:
                self._buckets.append((_TRIE, BlindTrie(sampled, self._w)))

    def rank(self, p, fetch):
        """Count of members < p; 0 <= p <= sigma.  Enforces the call budget."""
        calls = 0
        limit = self._budget

        def s(rank):
            nonlocal calls
            calls += 1
            if calls > limit:
                raise ProbeBudgetError(
                    f"pred rank exceeded {limit} accessor calls (k={self.k})"
                )
            return fetch(rank)

        if p <= 0 or self.m == 0:
            return 0
        if self._top is None:
            lo, hi = 0, self.m
            while lo < hi:
                mid = (lo + hi) // 2
                if s(mid) < p:
                    lo = mid + 1
                else:
                    hi = mid
            return lo
        j = bisect_left(self._top, p) - 1
        if j < 0:
            return 0
        g, k = self.g, self.k
        base = j * g
        bucket_end = min(base + g, self.m)
        kind, data = self._buckets[j]
        if kind == _EXPLICIT:
            local = 0
            for i, key in enumerate(data):
                if key < p:
                    local = i
        else:
            local = data.predecessor(p, lambda i: s(base + i * k))
            if local is None:  # cannot happen: sample 0 equals top[j] < p
                raise AssertionError("bucket lost its anchor sample")
        rho = base + local * k
        lo, hi = rho + 1, min(rho + k, bucket_end)
        while lo < hi:
            mid = (lo + hi) // 2
            if s(mid) < p:
                lo = mid + 1
            else:
                hi = mid
        return lo

    # -- size accounting and serialization ----------------------------------

    def _rank_width(self):
        return max(1, ((self.g + self.k - 1) // self.k).bit_length())

    def bits(self):
        """Exact payload size in bits; EMPTY_PRED_BITS when nothing is stored."""
        if self._top is None:
            return EMPTY_PRED_BITS
        w = self._w
        sw = max(1, (w - 1).bit_length())
        rw = self._rank_width()
        total = len(self._top) * w
        for kind, data in self._buckets:
            if kind == _EXPLICIT:
                total += (len(data) - 1) * w  # sample 0 is already in top
            else:
                total += data.bits(sw, rw)
        return total

    def write(self, bw):
        if self._top is None:
            return
        w = self._w
        sw = max(1, (w - 1).bit_length())
        rw = self._rank_width()
        for key in self._top:
            bw.write(key, w)
        for kind, data in self._buckets:
            if kind == _EXPLICIT:
                for key in data[1:]:
                    bw.write(key, w)
            else:
                data.write(bw, sw, rw)

    @classmethod
    def read(cls, br, m, sigma, k):
        ix = object.__new__(cls)
        ix.m = m
        ix.sigma = sigma
        ix.k = k
        ix.g = _width(sigma)
        ix._w = _width(sigma)
        ix._budget = budget(k)
        if m <= DIRECT_LIMIT:
            ix._top = None
            ix._buckets = None
            return ix
        g = ix.g
        w = ix._w
        sw = max(1, (w - 1).bit_length())
        rw = ix._rank_width()
        ntop = (m + g - 1) // g
        ix._top = [br.read(w) for _ in range(ntop)]
        ix._buckets = []
        for base in range(0, m, g):
            nsamp = (min(base + g, m) - base + k - 1) // k
            if nsamp <= 2:
                keys = [ix._top[base // g]]
                keys += [br.read(w) for _ in range(nsamp - 1)]
                ix._buckets.append((_EXPLICIT, keys))
            else:
                ix._buckets.append((_TRIE, BlindTrie.read(br, nsamp, w, sw, rw)))
        return ix
