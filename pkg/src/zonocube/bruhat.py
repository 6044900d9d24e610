"""Flip-graph enumeration, the higher Bruhat poset, and the slice map from
cubillages to cyclic-polytope triangulations."""

from __future__ import annotations

import itertools
import json
from math import comb
from typing import NamedTuple

from .colors import Colors, colorset, is_peripheral, is_r_separated, subsets
from .cubillage import Cubillage, CubillageError, standard
from .geom import Realization, cyclic_polytope_volume, triangulation_volume
from .order import apply_flip, find_flips
from .systems import _count_cliques, inversions


class ScaleGuardError(RuntimeError):
    """The requested enumeration exceeds the configured desk-scale caps."""


def enumerate_cubillages(n: int, d: int, max_types: int = 70,
                         max_states: int = 200000) -> tuple[Cubillage, ...]:
    """All cubillages of Z(n,d), grown from the standard one by raising flips.

    Complete because every non-standard cubillage admits a lowering flip.
    Refuses when C(n,d) exceeds max_types or the state count passes
    max_states.  The result is sorted canonically.
    """
    colors = tuple(range(1, n + 1))
    if d < 1 or n < d:
        raise ValueError(f"need n >= d >= 1, got ({n},{d})")
    if comb(n, d) > max_types:
        raise ScaleGuardError(f"C({n},{d}) = {comb(n, d)} exceeds the cap {max_types}")
    start = standard(colors, d)
    seen = {start.key(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for q in frontier:
            for parent, direction in find_flips(q):
                if direction != "raising":
                    continue
                q2 = apply_flip(q, parent)
                if q2.key() not in seen:
                    seen[q2.key()] = q2
                    nxt.append(q2)
                    if len(seen) > max_states:
                        raise ScaleGuardError(f"state count passed the cap {max_states}")
        frontier = nxt
    return tuple(sorted(seen.values(), key=lambda q: q.key()))


def separated_system_count(n: int, d: int) -> int:
    """Independent count of maximum-size (d-1)-separated systems in [n].

    Every such system contains all peripheral sets, so the count equals the
    number of cliques of the residual size among the non-peripheral sets in
    the separation graph.  Must agree with len(enumerate_cubillages(n,d)).
    """
    universe = [colorset(s) for k in range(n + 1) for s in subsets(range(1, n + 1), k)]
    nonper = [x for x in universe if not is_peripheral(x, n, d)]
    adj = [0] * len(nonper)
    for i, a in enumerate(nonper):
        for j in range(i + 1, len(nonper)):
            if is_r_separated(a, nonper[j], d - 1):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    bound = sum(comb(n, k) for k in range(d + 1))
    need = bound - (len(universe) - len(nonper))
    return _count_cliques(adj, (1 << len(nonper)) - 1, need)


class BruhatPoset:
    """The flip order on all cubillages of one zonotope.

    Elements are indexed in (rank, canonical key) order, covers are raising
    flips, rank is the inversion count.  Graded with the standard cubillage
    as unique minimum and the antistandard as unique maximum.
    """

    def __init__(self, n: int, d: int, elements: tuple[Cubillage, ...]):
        self.n = n
        self.d = d
        ranked = sorted(elements, key=lambda q: (len(inversions(q)), q.key()))
        self.elements = tuple(ranked)
        self.ranks = tuple(len(inversions(q)) for q in self.elements)
        index = {q.key(): i for i, q in enumerate(self.elements)}
        covers = []
        for i, q in enumerate(self.elements):
            for parent, direction in find_flips(q):
                if direction == "raising":
                    covers.append((i, index[apply_flip(q, parent).key()]))
        self.covers = tuple(sorted(covers))
        succ: dict[int, list[int]] = {}
        for a, b in self.covers:
            succ.setdefault(a, []).append(b)
        # covers raise rank and elements are rank-sorted, so b > a throughout
        up = [0] * len(self.elements)
        for i in range(len(self.elements) - 1, -1, -1):
            mask = 1 << i
            for b in succ.get(i, ()):
                mask |= up[b]
            up[i] = mask
        self._up = up

    def __len__(self):
        return len(self.elements)

    def leq(self, i: int, j: int) -> bool:
        return bool(self._up[i] & (1 << j))

    def minimal_elements(self) -> tuple[int, ...]:
        above = set(j for _, j in self.covers)
        return tuple(i for i in range(len(self.elements)) if i not in above)

    def maximal_elements(self) -> tuple[int, ...]:
        below = set(i for i, _ in self.covers)
        return tuple(i for i in range(len(self.elements)) if i not in below)

    def is_graded(self) -> bool:
        return all(self.ranks[j] == self.ranks[i] + 1 for i, j in self.covers)

    def join_failures(self, limit: int = 1) -> list[tuple[int, int]]:
        """Pairs with no least upper bound, up to the limit.

        Elements are bit-indexed in rank order, so the lowest set bit of a
        common upper set is one minimal upper bound m; the join exists iff
        every other common upper bound sits above m.
        """
        out = []
        size = len(self.elements)
        for i in range(size):
            for j in range(i + 1, size):
                common = self._up[i] & self._up[j]
                m = (common & -common).bit_length() - 1
                if common & ~self._up[m]:
                    out.append((i, j))
                    if len(out) >= limit:
                        return out
        return out

    def to_dot(self) -> str:
        lines = ["digraph bruhat {"]
        for i, q in enumerate(self.elements):
            lines.append(f'  q{i} [label="#{i} r{self.ranks[i]}"];')
        for i, j in self.covers:
            lines.append(f"  q{i} -> q{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def bruhat_poset(n: int, d: int, **caps) -> BruhatPoset:
    return BruhatPoset(n, d, enumerate_cubillages(n, d, **caps))


# ---------------------------------------------------------------------------
# the slice map to cyclic-polytope triangulations


class Triangulation(NamedTuple):
    colors: Colors
    d: int
    simplices: tuple[Colors, ...]

    def to_json(self) -> str:
        return json.dumps({
            "n": len(self.colors),
            "d": self.d,
            "simplices": [list(s) for s in self.simplices],
        })


def sec(q: Cubillage, realization: Realization | None = None) -> Triangulation:
    """Slice the cubillage at height one: cubes rooted at the origin become
    the simplices of a triangulation of the cyclic polytope.

    The result is certified by an exact volume identity against the
    evenness-rule facet fan; a mismatch means the input was corrupt.
    """
    simplices = tuple(sorted(c.type for c in q.cubes if c.root == ()))
    if realization is None:
        realization = Realization(q.colors, q.d)
    got = triangulation_volume(simplices, realization)
    want = cyclic_polytope_volume(q.colors, q.d, realization)
    if got != want:
        raise CubillageError(f"slice volume {got} != cyclic polytope volume {want}")
    return Triangulation(q.colors, q.d, simplices)


def triangulation_shape_ok(t: Triangulation) -> bool:
    """Combinatorial triangulation checks for d <= 3 (volume aside)."""
    cs = t.colors
    if t.d == 2:
        pts = sorted(s for s in t.simplices)
        cur = cs[0]
        for a, b in pts:
            if a != cur:
                return False
            cur = b
        return cur == cs[-1]
    if t.d == 3:
        if len(t.simplices) != len(cs) - 2:
            return False
        edge_count: dict[tuple[int, int], int] = {}
        for s in t.simplices:
            for e in itertools.combinations(s, 2):
                edge_count[e] = edge_count.get(e, 0) + 1
        hull = {(cs[i], cs[i + 1]) for i in range(len(cs) - 1)} | {(cs[0], cs[-1])}
        return all(c == (1 if e in hull else 2) for e, c in edge_count.items())
    raise ValueError("shape checks only cover d = 2 and d = 3")


def segment_subdivisions(n: int) -> set[tuple[Colors, ...]]:
    """All triangulations for d = 2: chains over any subset of inner points."""
    inner = range(2, n)
    out = set()
    for k in range(n - 1):
        for chosen in itertools.combinations(inner, k):
            stops = (1,) + chosen + (n,)
            out.add(tuple((stops[i], stops[i + 1]) for i in range(len(stops) - 1)))
    return out


def polygon_triangulations(n: int) -> set[tuple[Colors, ...]]:
    """All triangulations of the convex polygon on vertices 1..n (d = 3)."""

    def rec(lo: int, hi: int) -> list[tuple[Colors, ...]]:
        if hi - lo < 2:
            return [()]
        out = []
        for mid in range(lo + 1, hi):
            for left in rec(lo, mid):
                for right in rec(mid, hi):
                    out.append(tuple(sorted(left + ((lo, mid, hi),) + right)))
        return out

    return set(rec(1, n))


def sec_surjectivity_experiment(n: int, d: int, **caps) -> dict:
    """Compare the image of sec over all cubillages with the independently
    enumerated triangulations; exact for d <= 3, image size only beyond."""
    image = {tuple(sec(q).simplices) for q in enumerate_cubillages(n, d, **caps)}
    report = {"n": n, "d": d, "image_size": len(image)}
    if d == 2:
        universe = segment_subdivisions(n)
    elif d == 3:
        universe = polygon_triangulations(n)
    else:
        report["mode"] = "image_only"
        return report
    report["mode"] = "exact"
    report["total"] = len(universe)
    report["missed"] = sorted(universe - image)
    report["surjective"] = not report["missed"]
    assert image <= universe
    return report
