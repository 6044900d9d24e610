"""The natural order on the cubes of a cubillage and everything built on it:
stacks and membranes, capsid flips, avalanches, canonical extensions of
membranes, and the garland bijection between the front and back rims.
"""

from __future__ import annotations

import functools
from typing import NamedTuple

from .colors import Colors, add, colorset, inter, subsets, union
from .cubillage import (
    Cubillage,
    CubillageError,
    Facet,
    _pairing,
    antistandard,
    boundary_plates,
    cover_relations,
    expand,
    reduce as reduce_color,
    standard,
)


class NaturalOrder:
    """Reachability structure over the facet-adjacency precedence of cubes.

    Cube Q precedes Q' when they share a facet invisible for Q and visible
    for Q'; the partial order is the reflexive-transitive closure.  Built
    once per cubillage and cached there; a cycle means the input was corrupt.
    """

    def __init__(self, q: Cubillage):
        self.cubillage = q
        self.covers = cover_relations(q)
        self.types = sorted(q.types())
        self._index = {t: k for k, t in enumerate(self.types)}
        succs = {t: [] for t in self.types}
        indeg = {t: 0 for t in self.types}
        for below, above in self.covers:
            succs[below].append(above)
            indeg[above] += 1
        topo = [t for t in self.types if indeg[t] == 0]
        head = 0
        while head < len(topo):
            t = topo[head]
            head += 1
            for s in succs[t]:
                indeg[s] -= 1
                if indeg[s] == 0:
                    topo.append(s)
        if len(topo) != len(self.types):
            raise CubillageError("precedence relation has a cycle; not a cubillage")
        self._topo = topo
        up = {t: 1 << self._index[t] for t in self.types}
        for t in reversed(topo):
            mask = up[t]
            for s in succs[t]:
                mask |= up[s]
            up[t] = mask
        self._up = up

    def topological(self) -> list[Colors]:
        return list(self._topo)

    def leq(self, a, b) -> bool:
        a, b = colorset(a), colorset(b)
        return bool(self._up[a] & (1 << self._index[b]))

    def is_ideal(self, types_set) -> bool:
        member = frozenset(colorset(t) for t in types_set)
        if not member <= set(self.types):
            return False
        return all(below in member for below, above in self.covers if above in member)

    def ideals(self):
        """All downward closed type sets, by increasing size then lexicographically."""
        found = {frozenset()}
        frontier = [frozenset()]
        while frontier:
            nxt = []
            for ideal in frontier:
                for t in self.types:
                    if t in ideal:
                        continue
                    grown = ideal | {t}
                    if grown not in found and self.is_ideal(grown):
                        found.add(grown)
                        nxt.append(grown)
            frontier = nxt
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def to_dot(self) -> str:
        def name(t):
            return ",".join(map(str, t)) if any(c > 9 for c in t) else "".join(map(str, t))

        lines = ["digraph natural_order {"]
        for t in self.types:
            lines.append(f'  "{name(t)}";')
        for below, above in self.covers:
            lines.append(f'  "{name(below)}" -> "{name(above)}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


def natural_order(q: Cubillage) -> NaturalOrder:
    if "natural_order" not in q._cache:
        q._cache["natural_order"] = NaturalOrder(q)
    return q._cache["natural_order"]


def membrane_of_stack(q: Cubillage, stack) -> frozenset[Facet]:
    """The membrane swept out by an order ideal of cube types.

    Plates are the internal facets whose below cube is in the stack and above
    cube is not, plus front boundary plates of cubes outside the stack and
    back boundary plates of cubes inside it.
    """
    stack = frozenset(colorset(t) for t in stack)
    if not natural_order(q).is_ideal(stack):
        raise ValueError("stack is not a downward closed set of cube types")
    visible, invisible = _pairing(q)
    plates = set()
    for facet, below in invisible.items():
        above = visible.get(facet)
        if above is None:
            if below in stack:
                plates.add(facet)
        elif below in stack and above not in stack:
            plates.add(facet)
    for facet, above in visible.items():
        if facet not in invisible and above not in stack:
            plates.add(facet)
    return frozenset(plates)


def plate_vertices(plates) -> frozenset[Colors]:
    """All vertex spectra of a plate collection."""
    import itertools

    out = set()
    for plate in plates:
        for k in range(len(plate.type) + 1):
            for s in itertools.combinations(plate.type, k):
                out.add(union(plate.root, s))
    return frozenset(out)


def side_of_membrane(typ, membrane_vertices) -> str:
    """Locate the cube of a given type relative to a membrane.

    "before" when some membrane vertex meets the type in its top-alternating
    pattern {k_d, k_{d-2}, ...}, "after" for the shifted pattern
    {k_{d-1}, k_{d-3}, ...}.  Exactly one pattern occurs on an actual
    membrane; anything else raises.
    """
    t = colorset(typ)
    before_pat = tuple(sorted(t[::-1][::2]))
    after_pat = tuple(sorted(t[::-1][1::2]))
    hit_before = hit_after = False
    for v in membrane_vertices:
        cut = inter(v, t)
        if cut == before_pat:
            hit_before = True
        if cut == after_pat:
            hit_after = True
        if hit_before and hit_after:
            break
    if hit_before == hit_after:
        raise CubillageError(
            f"type {t}: membrane shows {'both' if hit_before else 'neither'} side patterns")
    return "before" if hit_before else "after"


def stack_of_membrane(q: Cubillage, plates) -> frozenset[Colors]:
    """Invert membrane_of_stack; raises when the plates are not a membrane of q."""
    plates = frozenset(plates)
    verts = plate_vertices(plates)
    stack = frozenset(t for t in q.types() if side_of_membrane(t, verts) == "before")
    if not natural_order(q).is_ideal(stack):
        raise CubillageError("membrane sides do not form an order ideal")
    if membrane_of_stack(q, stack) != plates:
        raise CubillageError("plates are not a membrane of this cubillage")
    return stack


def membrane_as_cubillage(q: Cubillage, plates) -> Cubillage:
    """Project a membrane along the viewing axis: plates become (d-1)-cubes."""
    return Cubillage(q.colors, q.d - 1, [(p.root, p.type) for p in plates])


def enumerate_stacks(q: Cubillage) -> list[frozenset[Colors]]:
    """Every stack; a distributive lattice under union and intersection."""
    return natural_order(q).ideals()


enumerate_membranes = enumerate_stacks


@functools.lru_cache(maxsize=None)
def _capsid_patterns(d: int):
    base = tuple(range(1, d + 2))
    std = frozenset((c.root, c.type) for c in standard(base, d).cubes)
    anti = frozenset((c.root, c.type) for c in antistandard(base, d).cubes)
    return std, anti


def _flip_fragment(q: Cubillage, parent: Colors):
    """Common outside-root and the position-relabeled fragment at a parent,
    or None when the d+1 cubes do not sit together as a capsid."""
    roots = []
    for t in subsets(parent, q.d):
        typ = colorset(t)
        if typ not in q:
            return None
        roots.append((typ, q.root_of(typ)))
    kset = set(parent)
    outside = {tuple(c for c in root if c not in kset) for _, root in roots}
    if len(outside) != 1:
        return None
    x0 = next(iter(outside))
    pos = {c: i + 1 for i, c in enumerate(parent)}
    frag = frozenset(
        (tuple(pos[c] for c in root if c in kset), tuple(pos[c] for c in typ))
        for typ, root in roots
    )
    return x0, frag


def find_flips(q: Cubillage) -> tuple[tuple[Colors, str], ...]:
    """All flippable parents with their direction.

    A parent K of size d+1 is flippable when the d+1 cubes typed inside K
    share a common root outside K; the fragment is then one of the two
    capsid cubillages, standard for a raising flip, antistandard for a
    lowering one.
    """
    std, anti = _capsid_patterns(q.d)
    out = []
    for parent in subsets(q.colors, q.d + 1):
        parent = colorset(parent)
        got = _flip_fragment(q, parent)
        if got is None:
            continue
        _, frag = got
        if frag == std:
            out.append((parent, "raising"))
        elif frag == anti:
            out.append((parent, "lowering"))
        else:
            raise CubillageError(f"fragment at parent {parent} is not a capsid cubillage")
    return tuple(out)


def apply_flip(q: Cubillage, parent) -> Cubillage:
    """Replace the capsid fragment at the parent by the opposite one."""
    parent = colorset(parent)
    got = _flip_fragment(q, parent)
    if got is None:
        raise ValueError(f"parent {parent} is not flippable")
    x0, frag = got
    std, anti = _capsid_patterns(q.d)
    if frag == std:
        replacement = anti
    elif frag == anti:
        replacement = std
    else:
        raise ValueError(f"parent {parent} is not flippable")
    unpos = dict(enumerate(parent, start=1))
    cubes = [(root, typ) for typ, root in q._root_by_type.items()
             if not set(typ) <= set(parent)]
    for r_pos, t_pos in replacement:
        root = union(x0, (unpos[p] for p in r_pos))
        cubes.append((root, tuple(unpos[p] for p in t_pos)))
    return Cubillage(q.colors, q.d, cubes)


def avalanche(q: Cubillage) -> Cubillage:
    """Move the whole top-color layer flush to the back boundary in one step."""
    m = q.colors[-1]
    inner = reduce_color(q, m).cubillage
    return expand(inner, inner.types(), m)


def standardize(q: Cubillage) -> tuple[Cubillage, ...]:
    """The canonical avalanche sequence from q down to the standard cubillage.

    Each step re-expands the reduction's standardization at the back, so the
    sequence is deterministic; the first entry is q itself and the last is
    standard(colors, d).
    """
    if q.n == q.d:
        return (q,)
    m = q.colors[-1]
    inner_seq = standardize(reduce_color(q, m).cubillage)
    return (q,) + tuple(expand(s, s.types(), m) for s in inner_seq)


def _canonical_flip(r: Cubillage, direction: str) -> Colors | None:
    """Parent of the next flip in the canonical (anti)standardization walk.

    Decomposes the avalanche sequence into single flips: take the top color m
    whose layer is not yet flush, and inside it the precedence-minimal cube
    strictly behind the layer (lowering) or the maximal one strictly before
    it (raising).  None once the walk has terminated.
    """
    if r.n == r.d:
        return None
    m = r.colors[-1]
    behind = direction == "lowering"
    movable = [t for t in r.types()
               if m not in t and (m in set(r.root_of(t))) == behind]
    if not movable:
        return _canonical_flip(reduce_color(r, m).cubillage, direction)
    topo = natural_order(r).topological()
    pool = set(movable)
    ordered = [t for t in topo if t in pool]
    pick = ordered[0] if behind else ordered[-1]
    return add(pick, m)


def canonical_extension(qp: Cubillage) -> Cubillage:
    """Lift a cubillage one dimension up so that it becomes a membrane.

    The region before the membrane is filled by walking qp down to the
    standard cubillage along the canonical standardization flips, recording
    one cube per flip at the flip's capsid position; the after region
    symmetrically walks up to the antistandard cubillage.  The stack of the
    membrane in the result is exactly the set of recorded before-cubes, and
    no lowering flip of the result stays inside that stack.
    """
    cubes = []
    for direction in ("lowering", "raising"):
        cur = qp
        while True:
            parent = _canonical_flip(cur, direction)
            if parent is None:
                break
            x0, _ = _flip_fragment(cur, parent)
            cubes.append((x0, parent))
            cur = apply_flip(cur, parent)
    return Cubillage(qp.colors, qp.d + 1, cubes)


class Garland(NamedTuple):
    chords: dict[Colors, tuple[Colors, Colors]]
    mapping: dict[Colors, Colors]


def garland(q: Cubillage) -> Garland:
    """Tail-to-head chords of all cubes and the induced front-to-back bijection.

    The cube typed {t_1 < ... < t_d} has head root ∪ {t_d, t_{d-2}, ...} and
    tail root ∪ {t_{d-1}, t_{d-3}, ...}; chords concatenate into vertex
    disjoint paths from front-membrane vertices to back-membrane ones, and
    rim vertices stay put.
    """
    chords = {}
    next_of = {}
    heads = set()
    for cube in q.cubes:
        t = cube.type
        head = union(cube.root, t[::-1][::2])
        tail = union(cube.root, t[::-1][1::2])
        chords[t] = (tail, head)
        if tail in next_of or head in heads:
            raise CubillageError("chords do not form vertex disjoint paths")
        next_of[tail] = head
        heads.add(head)
    front = plate_vertices(boundary_plates(q.colors, q.d, "front"))
    back = plate_vertices(boundary_plates(q.colors, q.d, "back"))
    rim = front & back
    mapping = {}
    for v in sorted(front):
        if v in rim:
            if v in next_of or v in heads:
                raise CubillageError(f"rim vertex {v} lies on a chord")
            mapping[v] = v
            continue
        cur = v
        seen = {cur}
        while cur in next_of:
            cur = next_of[cur]
            if cur in seen:
                raise CubillageError("chords form a cycle")
            seen.add(cur)
        if cur not in back:
            raise CubillageError(f"garland path from {v} ends off the back membrane at {cur}")
        mapping[v] = cur
    if sorted(mapping.values()) != sorted(back):
        raise CubillageError("garland mapping is not a bijection onto the back vertices")
    return Garland(chords, mapping)
