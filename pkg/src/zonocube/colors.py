"""Base calculus on finite sets of colors.

Colors are positive integers (not necessarily contiguous: deleting a color
never relabels the rest).  A color set is always a strictly increasing tuple;
these tuples are the single currency used for cube roots, cube types, vertex
spectra and set systems everywhere in the package.  Everything here is pure
and immutable.
"""

from __future__ import annotations

import itertools
import json

Colors = tuple[int, ...]


def colorset(items) -> Colors:
    """Canonicalize an iterable of colors into a strictly increasing tuple."""
    cs = tuple(sorted(items))
    if any(b <= a for a, b in zip(cs, cs[1:])):
        raise ValueError(f"duplicate colors in {cs}")
    if cs and cs[0] < 1:
        raise ValueError(f"colors must be positive integers, got {cs}")
    return cs


def union(a: Colors, b) -> Colors:
    return tuple(sorted(set(a) | set(b)))


def minus(a: Colors, b) -> Colors:
    bs = set(b)
    return tuple(x for x in a if x not in bs)


def inter(a: Colors, b) -> Colors:
    bs = set(b)
    return tuple(x for x in a if x in bs)


def add(a: Colors, i: int) -> Colors:
    """a ∪ {i} for i not in a."""
    out = []
    placed = False
    for x in a:
        if not placed and i < x:
            out.append(i)
            placed = True
        out.append(x)
    if not placed:
        out.append(i)
    return tuple(out)


def subsets(universe, size: int):
    """All size-subsets of the universe as sorted tuples, in lex order."""
    return itertools.combinations(sorted(universe), size)


def is_even(i: int, js: Colors) -> bool:
    """True when the number of members of js above i is even."""
    return sum(1 for j in js if j > i) % 2 == 0


def parity(i: int, js) -> str:
    """Side of color i relative to the set js, as "even" or "odd".

    The colors of js split the integer line into intervals numbered from the
    top down (interval 0 lies above max(js)); i is even when it falls into an
    even-numbered interval.  Equivalently the moment-curve determinant
    det(v_{j_1},...,v_{j_{d-1}}, v_i) is positive exactly for even i; the
    geom module cross-checks this.
    """
    js = colorset(js)
    if i in js:
        raise ValueError(f"color {i} is a member of {js}")
    return "even" if is_even(i, js) else "odd"


def separation_blocks(x, y) -> int:
    """Number of maximal same-side blocks in the symmetric difference.

    The elements of (x-y) ∪ (y-x) are listed in increasing order and labeled
    by the side they came from; the count of maximal constant-label runs is
    returned.  x and y are r-separated exactly when this is at most r+1; an
    empty symmetric difference gives 0.
    """
    sx, sy = set(x), set(y)
    m = 0
    prev = None
    for c in sorted(sx ^ sy):
        side = c in sx
        if side != prev:
            m += 1
            prev = side
    return m


def is_r_separated(x, y, r: int) -> bool:
    return separation_blocks(x, y) <= r + 1


def is_weakly_k_separated(x, y, k: int) -> bool:
    """Weak k-separation for odd k.

    Holds when x and y are k-separated outright, or when their symmetric
    difference splits into exactly k+2 alternating blocks and the surrounding
    set (the one owning the first and last block; well defined since k+2 is
    odd) is no larger than the other one.  Even k is rejected: no sensible
    notion exists there.
    """
    if k % 2 == 0 or k < 1:
        raise ValueError(f"weak separation needs odd k >= 1, got {k}")
    m = separation_blocks(x, y)
    if m <= k + 1:
        return True
    if m > k + 2:
        return False
    first = min(set(x) ^ set(y))
    surrounding, other = (x, y) if first in set(x) else (y, x)
    return len(set(surrounding)) <= len(set(other))


def interval_rank(x) -> int:
    """Minimal number of integer intervals whose union is x."""
    xs = sorted(set(x))
    return sum(1 for i, c in enumerate(xs) if i == 0 or c != xs[i - 1] + 1)


def is_peripheral(x, n: int, d: int) -> bool:
    """True when x is the spectrum of a vertex of the ambient zonotope.

    Criterion: interval_rank(x) + interval_rank([n]-x) <= d.  Peripheral sets
    are (d-1)-separated from every subset of [n].
    """
    xs = set(x)
    comp = [c for c in range(1, n + 1) if c not in xs]
    return interval_rank(xs) + interval_rank(comp) <= d


def packet(parent, d: int) -> tuple[Colors, ...]:
    """The packet of a (d+1)-element parent: its d-subsets in lex order.

    For parent {i_1 < ... < i_{d+1}} the lex order is
    parent-i_{d+1} < parent-i_d < ... < parent-i_1.
    """
    ks = colorset(parent)
    if len(ks) != d + 1:
        raise ValueError(f"parent {ks} must have size {d + 1}")
    return tuple(minus(ks, (i,)) for i in reversed(ks))


class SetSystem:
    """A duplicate-free collection of subsets of [n], kept canonically sorted."""

    def __init__(self, n: int, sets):
        self.n = int(n)
        members = [colorset(s) for s in sets]
        canon = sorted(set(members))
        if len(canon) != len(members):
            raise ValueError("duplicate member sets")
        for s in canon:
            if s and s[-1] > self.n:
                raise ValueError(f"member {s} exceeds universe [{self.n}]")
        self.sets: tuple[Colors, ...] = tuple(canon)

    def __iter__(self):
        return iter(self.sets)

    def __len__(self):
        return len(self.sets)

    def __contains__(self, s):
        return colorset(s) in set(self.sets)

    def __eq__(self, other):
        return isinstance(other, SetSystem) and (self.n, self.sets) == (other.n, other.sets)

    def __hash__(self):
        return hash((self.n, self.sets))

    def __repr__(self):
        return f"SetSystem(n={self.n}, sets={[''.join(map(str, s)) or '-' for s in self.sets]})"

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "sets": [list(s) for s in self.sets]})

    @classmethod
    def from_json(cls, text: str) -> "SetSystem":
        data = json.loads(text)
        return cls(data["n"], data["sets"])
