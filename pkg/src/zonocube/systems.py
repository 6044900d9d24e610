"""Set-system avatars of cubillages.

A cubillage of Z(n,d) can be handed around as (a) the system of its vertex
spectra, (b) the admissible order its natural order induces on d-subsets, or
(c) its inversion system of (d+1)-subsets.  This module moves between all
three and implements the completion/purity searches on separated systems.

Dimension bookkeeping for inversions: the inversion system of a d-dimensional
cubillage consists of (d+1)-subsets (parents with antilexicographic packets);
consistent systems of d-subsets of [n] correspond to membranes of Z(n,d).
"""

from __future__ import annotations

import itertools
import json
from math import comb
from typing import NamedTuple

from .colors import (
    Colors,
    add,
    colorset,
    is_peripheral,
    is_r_separated,
    is_weakly_k_separated,
    minus,
    packet,
    subsets,
)
from .cubillage import Cubillage, CubillageError, Facet, expand
from .order import (
    membrane_of_stack,
    natural_order,
    plate_vertices,
    side_of_membrane,
)


class NotRealizableError(CubillageError):
    """A reconstruction precondition held but the recursion still failed."""


def inversions(q: Cubillage) -> frozenset[Colors]:
    """Parents whose packet the cubillage orders antilexicographically.

    K is an inversion exactly when the cube typed K - max(K) sits behind the
    top-color layer of K, i.e. max(K) belongs to its root.  Empty for the
    standard cubillage, all of Gr(colors,d+1) for the antistandard one.
    """
    out = []
    for parent in subsets(q.colors, q.d + 1):
        k = parent[-1]
        if k in set(q.root_of(parent[:-1])):
            out.append(colorset(parent))
    return frozenset(out)


class AdmissibleOrder:
    """A partial order on d-subsets whose packet restrictions are all lex or
    antilex chains.  Stored as generating relations; the closure is built and
    the admissibility invariant is checked at construction."""

    def __init__(self, colors, d: int, relations):
        self.colors: Colors = colorset(colors)
        self.d = int(d)
        self.relations = tuple(sorted((colorset(a), colorset(b)) for a, b in relations))
        nodes = [colorset(t) for t in subsets(self.colors, self.d)]
        index = {t: i for i, t in enumerate(nodes)}
        for a, b in self.relations:
            if a not in index or b not in index:
                raise ValueError(f"relation {a} < {b} leaves the grassmannian")
        succs = {t: set() for t in nodes}
        for a, b in self.relations:
            succs[a].add(b)
        up = {}
        state = {t: 0 for t in nodes}

        def reach(t):
            if state[t] == 2:
                return up[t]
            if state[t] == 1:
                raise ValueError("relations contain a cycle; not an order")
            state[t] = 1
            mask = 1 << index[t]
            for s in succs[t]:
                mask |= reach(s)
            up[t] = mask
            state[t] = 2
            return mask

        for t in nodes:
            reach(t)
        self._nodes = nodes
        self._index = index
        self._up = up
        for parent in subsets(self.colors, self.d + 1):
            self.packet_direction(colorset(parent))

    def leq(self, a, b) -> bool:
        a, b = colorset(a), colorset(b)
        return bool(self._up[a] & (1 << self._index[b]))

    def packet_direction(self, parent) -> str:
        """"lex" or "antilex"; raises when the packet is not a full chain."""
        chain = packet(parent, self.d)
        if all(self.leq(a, b) for a, b in zip(chain, chain[1:])):
            return "lex"
        if all(self.leq(b, a) for a, b in zip(chain, chain[1:])):
            return "antilex"
        raise ValueError(f"packet of {colorset(parent)} is not a lex or antilex chain")

    def linear_extension(self) -> list[Colors]:
        return sorted(self._nodes, key=lambda t: (-bin(self._up[t]).count("1"), t))

    def extends(self, other: "AdmissibleOrder") -> bool:
        """True when every relation of other also holds here."""
        return all(self.leq(a, b) for a, b in other.relations)

    def __eq__(self, other):
        return (isinstance(other, AdmissibleOrder)
                and (self.colors, self.d) == (other.colors, other.d)
                and self._up == other._up)

    def __hash__(self):
        return hash((self.colors, self.d, tuple(sorted(self._up.items()))))

    def to_json(self) -> str:
        n = self.colors[-1] if self.colors else 0
        if self.colors != tuple(range(1, n + 1)):
            raise ValueError("JSON form requires contiguous colors 1..n")
        return json.dumps({
            "n": n,
            "d": self.d,
            "relations": [[list(a), list(b)] for a, b in self.relations],
        })

    @classmethod
    def from_json(cls, text: str) -> "AdmissibleOrder":
        data = json.loads(text)
        return cls(range(1, data["n"] + 1), data["d"],
                   [(a, b) for a, b in data["relations"]])


def order_of(q: Cubillage) -> AdmissibleOrder:
    """Transport the natural order of the cubillage to its cube types."""
    return AdmissibleOrder(q.colors, q.d, natural_order(q).covers)


def from_order(order: AdmissibleOrder) -> Cubillage:
    """Reconstruct the unique cubillage whose natural order the given
    admissible order extends.

    Recursion on the top color m: rebuild over colors - m, collect the types
    whose parent packet with m is lex (an ideal of the smaller cubillage),
    and expand along its membrane by m.
    """

    def build(cs: Colors) -> Cubillage:
        if len(cs) == order.d:
            return Cubillage(cs, order.d, [((), cs)])
        m = cs[-1]
        inner = build(cs[:-1])
        ideal = frozenset(
            colorset(t) for t in subsets(cs[:-1], order.d)
            if order.packet_direction(add(colorset(t), m)) == "lex"
        )
        if not natural_order(inner).is_ideal(ideal):
            raise CubillageError(f"lex types at color {m} are not an order ideal; not admissible")
        return expand(inner, ideal, m)

    if len(order.colors) < order.d:
        raise ValueError("fewer colors than the dimension")
    q = build(order.colors)
    if not order.extends(order_of(q)):
        raise CubillageError("reconstructed cubillage order is not refined by the input")
    return q


def is_consistent(sets, n: int) -> bool:
    """Whether every parent packet meets the system in an initial or final
    segment of its lex order.  All member sets must share one size."""
    members = {colorset(s) for s in sets}
    sizes = {len(s) for s in members}
    if len(sizes) > 1:
        raise ValueError(f"mixed member sizes {sorted(sizes)}")
    if not members:
        return True
    d = sizes.pop()
    for parent in subsets(range(1, n + 1), d + 1):
        chain = packet(parent, d)
        flags = [t in members for t in chain]
        k = sum(flags)
        if k and not (all(flags[:k]) or all(flags[-k:])):
            return False
    return True


class MembraneWitness(NamedTuple):
    plates: frozenset[Facet]
    projected: Cubillage
    ambient: Cubillage
    stack: frozenset[Colors]


def from_consistent(sets, n: int, d: int) -> MembraneWitness:
    """Build the membrane of Z(n,d) whose inversion system is the given
    consistent family of d-subsets.

    Following the reconstruction recursion: realize the members avoiding the
    top color as a membrane one color down, complete it canonically to an
    ambient cubillage, expand by the top color, and cut along the stack whose
    type set is the input.  The projected membrane is a (d-1)-cubillage whose
    inversion system equals the input.
    """
    members = {colorset(s) for s in sets}
    if any(len(s) != d for s in members):
        raise ValueError(f"members must be {d}-subsets")
    if not is_consistent(members, n):
        raise ValueError("system is not consistent")
    colors = tuple(range(1, n + 1))
    if d == 1:
        # membranes of a segment chain are lattice points; stack any chain
        # cubillage listing the inverted colors first
        low = sorted(c for c in colors if (c,) in members)
        high = [c for c in colors if (c,) not in members]
        seq = low + high
        prefix: tuple[int, ...] = ()
        cubes = []
        for c in seq:
            cubes.append((prefix, (c,)))
            prefix = add(prefix, c)
        ambient = Cubillage(colors, 1, cubes)
    elif n == d:
        ambient = Cubillage(colors, d, [((), colors)])
    else:
        sub = {s for s in members if n not in s}
        inner = from_consistent(sub, n - 1, d)
        ambient = expand(inner.ambient, inner.stack, n)
    stack = frozenset(members)
    if not natural_order(ambient).is_ideal(stack):
        raise CubillageError("consistent system is not a stack of the ambient cubillage")
    plates = membrane_of_stack(ambient, stack)
    projected = Cubillage(colors, d - 1, [(p.root, p.type) for p in plates]) if d > 1 else None
    if projected is not None and inversions(projected) != stack:
        raise CubillageError("membrane inversion system does not reproduce the input")
    return MembraneWitness(plates, projected, ambient, stack)


def _check_separated(sets, r: int):
    sets = sorted(sets)
    for a, b in itertools.combinations(sets, 2):
        if not is_r_separated(a, b, r):
            raise ValueError(f"{a} and {b} are not {r}-separated")


def from_spectra(sets, colors, d: int | None = None) -> Cubillage:
    """Reconstruct the cubillage whose vertex spectra are the given system.

    Requires a (d-1)-separated system of size C(n,<=d).  Splits on the top
    color: the doubled spectra S0 ∩ S2 are the membrane along which the
    reconstruction of the smaller system is expanded.
    """
    cs = colorset(colors)
    members = {colorset(s) for s in sets}
    if d is None:
        sizes = [k for k in range(len(cs) + 1)
                 if sum(comb(len(cs), j) for j in range(k + 1)) == len(members)]
        if not sizes:
            raise ValueError(f"size {len(members)} is not C({len(cs)},<=d) for any d")
        d = sizes[0]
    if len(members) != sum(comb(len(cs), j) for j in range(d + 1)):
        raise ValueError("system size is not C(n,<=d)")
    _check_separated(members, d - 1)
    return _from_spectra(members, cs, d)


def _from_spectra(members, cs: Colors, d: int) -> Cubillage:
    if any(not set(s) <= set(cs) for s in members):
        raise NotRealizableError("spectra leave the color universe")
    if len(cs) == d:
        if members != {colorset(s) for k in range(d + 1) for s in subsets(cs, k)}:
            raise NotRealizableError("base case is not the full cube spectrum")
        return Cubillage(cs, d, [((), cs)])
    m = cs[-1]
    s0 = {s for s in members if m not in s}
    s2 = {minus(s, (m,)) for s in members if m in s}
    inner = _from_spectra(s0 | s2, cs[:-1], d)
    seam_vertices = s0 & s2
    try:
        stack = frozenset(
            t for t in inner.types() if side_of_membrane(t, seam_vertices) == "before")
    except CubillageError as exc:
        raise NotRealizableError(f"seam spectra do not describe a membrane: {exc}") from exc
    if not natural_order(inner).is_ideal(stack):
        raise NotRealizableError("seam stack is not an order ideal")
    if plate_vertices(membrane_of_stack(inner, stack)) != seam_vertices:
        raise NotRealizableError("seam membrane does not reproduce the doubled spectra")
    return expand(inner, stack, m)


# ---------------------------------------------------------------------------
# clique machinery over bitmask adjacency


def _max_clique(adj: list[int], cand_mask: int) -> int:
    """Largest clique size inside cand_mask; greedy-colored branch and bound."""
    best = 0

    def order_by_color(mask):
        verts = []
        bounds = []
        color_classes = []
        m = mask
        while m:
            cls = 0
            avail = m
            while avail:
                v = (avail & -avail).bit_length() - 1
                cls |= 1 << v
                avail &= ~adj[v] & avail & ~(1 << v)
            m &= ~cls
            color_classes.append(cls)
        for ci, cls in enumerate(color_classes, start=1):
            mm = cls
            while mm:
                v = (mm & -mm).bit_length() - 1
                mm &= mm - 1
                verts.append(v)
                bounds.append(ci)
        return verts, bounds

    def grow(mask, size):
        nonlocal best
        if not mask:
            best = max(best, size)
            return
        verts, bounds = order_by_color(mask)
        for i in range(len(verts) - 1, -1, -1):
            if size + bounds[i] <= best:
                return
            v = verts[i]
            grow(mask & adj[v], size + 1)
            mask &= ~(1 << v)

    grow(cand_mask, 0)
    return best


def _maximal_cliques(adj: list[int], cand_mask: int):
    """Bron-Kerbosch with pivoting over the masked vertex set."""
    out = []

    def bk(r, p, x):
        if not p and not x:
            out.append(r)
            return
        pivot_pool = p | x
        u = (pivot_pool & -pivot_pool).bit_length() - 1
        best_u, best_cnt = u, -1
        mm = pivot_pool
        while mm:
            v = (mm & -mm).bit_length() - 1
            mm &= mm - 1
            cnt = bin(p & adj[v]).count("1")
            if cnt > best_cnt:
                best_u, best_cnt = v, cnt
        ext = p & ~adj[best_u]
        while ext:
            v = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            bk(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v
    bk(0, cand_mask, 0)
    return out


def _count_cliques(adj: list[int], cand_mask: int, size: int) -> int:
    if size == 0:
        return 1
    total = 0
    mm = cand_mask
    while mm:
        v = (mm & -mm).bit_length() - 1
        mm &= mm - 1
        nxt = cand_mask & adj[v] & ~((1 << (v + 1)) - 1)
        if bin(nxt).count("1") >= size - 1:
            total += _count_cliques(adj, nxt, size - 1)
    return total


class ExtensionReport(NamedTuple):
    n: int
    d: int
    base_size: int
    bound: int
    completable: bool
    completion: tuple[Colors, ...] | None
    maximal_sizes: tuple[int, ...] | None
    maximal_completions: tuple[tuple[Colors, ...], ...] | None

    @property
    def gap(self) -> int | None:
        if self.maximal_sizes is None:
            return None
        return self.bound - min(self.maximal_sizes)


def extension_search(sets, n: int, d: int, mode: str = "complete") -> ExtensionReport:
    """Completion search for a pairwise (d-1)-separated system inside [n].

    Peripheral sets are compatible with everything, so every maximal
    completion contains all of them and the search branches only over the
    non-peripheral candidates; this collapses the interesting cases to a few
    dozen vertices.  complete mode looks for a completion reaching the
    C(n,<=d) maximum; certify-maximal enumerates the maximal-by-inclusion
    completions and reports their sizes.
    """
    if mode not in ("complete", "certify-maximal"):
        raise ValueError(f"unknown mode {mode!r}")
    members = sorted({colorset(s) for s in sets})
    _check_separated(members, d - 1)
    bound = sum(comb(n, k) for k in range(d + 1))
    universe = [colorset(s) for k in range(n + 1) for s in subsets(range(1, n + 1), k)]
    member_set = set(members)
    peripheral = [x for x in universe if is_peripheral(x, n, d)]
    base = sorted(member_set | set(peripheral))
    cands = [x for x in universe
             if x not in set(base) and not is_peripheral(x, n, d)
             and all(is_r_separated(x, s, d - 1) for s in members)]
    adj = [0] * len(cands)
    for i, a in enumerate(cands):
        for j in range(i + 1, len(cands)):
            if is_r_separated(a, cands[j], d - 1):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    full = (1 << len(cands)) - 1
    need = bound - len(base)
    if mode == "complete":
        completion = None
        if need <= _max_clique(adj, full):
            # rerun keeping a witness of the right size
            witness = _clique_witness(adj, full, need)
            completion = tuple(sorted(set(base) | {cands[v] for v in witness}))
        return ExtensionReport(n, d, len(members), bound, completion is not None,
                               completion, None, None)
    cliques = _maximal_cliques(adj, full) or [0]
    completions = []
    for mask in cliques:
        chosen = {cands[v] for v in _bits(mask)}
        completions.append(tuple(sorted(set(base) | chosen)))
    completions.sort(key=lambda c: (len(c), c))
    sizes = tuple(len(c) for c in completions)
    return ExtensionReport(n, d, len(members), bound, bound in sizes,
                           completions[-1] if bound in sizes else None,
                           sizes, tuple(completions))


def _bits(mask: int):
    while mask:
        v = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        yield v


def _clique_witness(adj: list[int], cand_mask: int, size: int):
    """Some clique of exactly the requested size, or None."""
    if size == 0:
        return []
    mm = cand_mask
    while mm:
        v = (mm & -mm).bit_length() - 1
        mm &= mm - 1
        if bin(cand_mask & adj[v]).count("1") >= size - 1:
            rest = _clique_witness(adj, cand_mask & adj[v] & ~((1 << (v + 1)) - 1), size - 1)
            if rest is not None:
                return [v] + rest
        cand_mask &= ~(1 << v)
    return None


def weak_separation_suite(n: int, k: int) -> dict:
    """Exhaustive maximum-size search for weakly k-separated systems in [n].

    Peripheral sets (for d = k+1) are k-separated with everything, hence
    always extend a weak system; the exact maximum is their count plus the
    largest weak clique among the remaining sets.  Reports the maximum and
    whether it meets the C(n,<=k+1) ceiling.
    """
    if k % 2 == 0 or k < 1:
        raise ValueError(f"weak separation needs odd k >= 1, got {k}")
    bound = sum(comb(n, j) for j in range(k + 2))
    universe = [colorset(s) for m in range(n + 1) for s in subsets(range(1, n + 1), m)]
    peripheral = [x for x in universe if is_peripheral(x, n, k + 1)]
    others = [x for x in universe if not is_peripheral(x, n, k + 1)]
    adj = [0] * len(others)
    for i, a in enumerate(others):
        for j in range(i + 1, len(others)):
            if is_weakly_k_separated(a, others[j], k):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    best = _max_clique(adj, (1 << len(others)) - 1)
    maximum = len(peripheral) + best
    return {
        "n": n,
        "k": k,
        "bound": bound,
        "max_size": maximum,
        "meets_bound": maximum == bound,
        "peripheral": len(peripheral),
        "non_peripheral_clique": best,
    }
