"""Inverse evaluation for a permutation given only forward evaluations.

A permutation pi over [L] is augmented with back-shortcuts: along every
non-trivial cycle of length >= spacing, every spacing-th element (walking
forward from the cycle's minimum) is marked and stores the element spacing
steps behind it.
Inverting then walks forward from the query, takes at most one back-jump at
the first marked element, and walks on until the predecessor shows up; the
gap structure bounds the forward evaluations by 2 * spacing + 1.
"""

from __future__ import annotations

from .bits import BitBuilder
from .errors import MalformedInputError, OutOfRangeError, ProbeBudgetError


def eval_budget(spacing):
    """Hard bound on forward evaluations per inversion."""
    return 2 * spacing + 1


class ShortcutTable:
    """Marked-position bitvector plus packed back-pointers for one permutation."""

    __slots__ = ("length", "spacing", "marked", "targets", "_tgt_width")

    def __init__(self, pi, length, spacing):
        """Build from an evaluator pi over [length]; build-time calls are free."""
        if spacing < 1:
            raise MalformedInputError(f"spacing must be >= 1, got {spacing}")
        image = [pi(x) for x in range(length)]
        seen = bytearray(length)
        for v in image:
            if not 0 <= v < length or seen[v]:
                raise MalformedInputError("evaluator is not a bijection on [L]")
            seen[v] = 1
        self.length = length
        self.spacing = spacing
        self._tgt_width = max(1, (length - 1).bit_length()) if length else 1
        back = {}
        visited = bytearray(length)
        for start in range(length):
            if visited[start]:
                continue
            cycle = [start]
            visited[start] = 1
            x = image[start]
            while x != start:
                visited[x] = 1
                cycle.append(x)
                x = image[x]
            c = len(cycle)
            # Fixed points resolve in one evaluation; cycles shorter than the
            # spacing resolve within it.  Neither needs shortcuts.
            if c < spacing or c == 1:
                continue
            lead = cycle.index(min(cycle))
            for step in range(0, c, spacing):
                elem = cycle[(lead + step) % c]
                back[elem] = cycle[(lead + step - spacing) % c]
        builder = BitBuilder()
        for x in range(length):
            builder.append(1 if x in back else 0)
        self.marked = builder.build()
        self.targets = [back[x] for x in sorted(back)]

    def invert(self, q, pi):
        """Return i with pi(i) == q, using at most eval_budget(spacing) calls."""
        if not 0 <= q < self.length:
            raise OutOfRangeError(f"value {q} outside [0, {self.length})")
        limit = eval_budget(self.spacing)
        marked = self.marked
        evals = 0
        x = q
        jumped = False
        while True:
            if not jumped and marked.get(x):
                x = self.targets[marked.rank1(x)]
                jumped = True
                continue
            evals += 1
            if evals > limit:
                raise ProbeBudgetError(
                    f"inversion exceeded {limit} evaluations (spacing={self.spacing})"
                )
            y = pi(x)
            if y == q:
                return x
            x = y

    # -- size accounting and serialization ----------------------------------

    def target_bits(self):
        """Back-pointer array only: count of marks times ceil(log2 L)."""
        return len(self.targets) * self._tgt_width

    def bits(self):
        return self.marked.nbits + self.target_bits()

    def write(self, bw):
        bw.write_bv(self.marked)
        for t in self.targets:
            bw.write(t, self._tgt_width)

    @classmethod
    def read(cls, br, length, spacing):
        tab = object.__new__(cls)
        tab.length = length
        tab.spacing = spacing
        tab._tgt_width = max(1, (length - 1).bit_length()) if length else 1
        tab.marked = br.read_bv(length)
        tab.targets = [br.read(tab._tgt_width) for _ in range(tab.marked.ones)]
        return tab
