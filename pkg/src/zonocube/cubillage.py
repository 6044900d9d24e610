"""Cubes and cubillages of cyclic zonotopes.

A cubillage of Z(C,d) is encoded purely combinatorially: a map from each
d-subset of the color set C (the cube's type) to the spectrum of the cube's
root vertex.  The single source of geometric truth is the parity rule from
colors.is_even; the geom module re-derives every visibility decision from
exact determinants and is used in the tests to cross-check this module.

All values are immutable; operations return fresh objects.
"""

from __future__ import annotations

import itertools
import json
from math import comb
from typing import NamedTuple

from .colors import Colors, add, colorset, inter, is_even, minus, subsets, union


class Cube(NamedTuple):
    root: Colors
    type: Colors


class Facet(NamedTuple):
    root: Colors
    type: Colors


class CubillageError(Exception):
    """A structural diagnostic: the input is not what it claims to be."""


class Cubillage:
    """A type-indexed collection of cubes over a fixed color set.

    Construction does not validate tiling-hood; call validate() for the full
    diagnosis.  Instances are immutable by convention and hash on their
    canonical cube listing.
    """

    __slots__ = ("colors", "d", "_root_by_type", "_cache")

    def __init__(self, colors, d: int, cubes):
        self.colors: Colors = colorset(colors)
        self.d = int(d)
        if self.d < 1:
            raise ValueError("dimension must be >= 1")
        by_type = {}
        for root, typ in cubes:
            root = colorset(root)
            typ = colorset(typ)
            if typ in by_type:
                raise ValueError(f"duplicate cube type {typ}")
            by_type[typ] = root
        self._root_by_type = by_type
        self._cache = {}

    @property
    def cubes(self) -> tuple[Cube, ...]:
        return tuple(Cube(self._root_by_type[t], t) for t in sorted(self._root_by_type))

    @property
    def n(self) -> int:
        return len(self.colors)

    def types(self):
        return sorted(self._root_by_type)

    def root_of(self, typ) -> Colors:
        return self._root_by_type[colorset(typ)]

    def __contains__(self, typ) -> bool:
        return colorset(typ) in self._root_by_type

    def __len__(self):
        return len(self._root_by_type)

    def key(self):
        return (self.colors, self.d, tuple(sorted(self._root_by_type.items())))

    def __eq__(self, other):
        return isinstance(other, Cubillage) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        body = ", ".join(f"({''.join(map(str, r)) or '-'},{''.join(map(str, t))})" for r, t in
                         ((c.root, c.type) for c in self.cubes))
        return f"Cubillage(Z({self.n},{self.d}); {body})"

    def vertices(self) -> frozenset[Colors]:
        """All vertex spectra: root ∪ S over cubes and subsets S of their types."""
        if "vertices" not in self._cache:
            seen = set()
            for typ, root in self._root_by_type.items():
                for k in range(len(typ) + 1):
                    for s in itertools.combinations(typ, k):
                        seen.add(union(root, s))
            self._cache["vertices"] = frozenset(seen)
        return self._cache["vertices"]

    spectra = vertices

    def to_json(self) -> str:
        return json.dumps({
            "colors": list(self.colors),
            "d": self.d,
            "cubes": [{"root": list(c.root), "type": list(c.type)} for c in self.cubes],
        })

    @classmethod
    def from_json(cls, text: str) -> "Cubillage":
        data = json.loads(text)
        return cls(data["colors"], data["d"], [(c["root"], c["type"]) for c in data["cubes"]])


def facet_sides(cube: Cube) -> dict[int, tuple[Facet, Facet]]:
    """For each type color t, the (visible, invisible) facet pair across t.

    The facet spanning type-t, i.e. J = type - t, sits at the cube root or is
    shifted by t; the invisible one is the unshifted copy exactly when t is
    odd relative to J.
    """
    out = {}
    for t in cube.type:
        j = minus(cube.type, (t,))
        at_root = Facet(cube.root, j)
        shifted = Facet(add(cube.root, t), j)
        if is_even(t, j):
            out[t] = (at_root, shifted)
        else:
            out[t] = (shifted, at_root)
    return out


def boundary_plates(colors, d: int, side: str) -> frozenset[Facet]:
    """Boundary facets of the zonotope Z(colors,d) on the requested side.

    For each (d-1)-subset J the front plate is rooted at the odd-parity
    colors outside J and the back plate at the even-parity ones; together the
    two sides have 2*C(n,d-1) plates.
    """
    cs = colorset(colors)
    if len(cs) < d:
        raise ValueError(f"need at least {d} colors, got {cs}")
    if side not in ("front", "back"):
        raise ValueError(f"side must be 'front' or 'back', not {side!r}")
    want_even = side == "back"
    plates = set()
    for j in subsets(cs, d - 1):
        root = tuple(c for c in cs if c not in j and is_even(c, j) == want_even)
        plates.add(Facet(root, j))
    return frozenset(plates)


def _pairing(q: Cubillage):
    """Facet incidence maps: facet -> owning type, per side.  Raises on clashes."""
    if "pairing" in q._cache:
        return q._cache["pairing"]
    visible = {}
    invisible = {}
    for typ, root in q._root_by_type.items():
        for vis, invis in facet_sides(Cube(root, typ)).values():
            for table, facet in ((visible, vis), (invisible, invis)):
                if facet in table:
                    raise CubillageError(
                        f"facet {facet} claimed twice on the same side by {table[facet]} and {typ}")
                table[facet] = typ
    q._cache["pairing"] = (visible, invisible)
    return visible, invisible


def cover_relations(q: Cubillage) -> tuple[tuple[Colors, Colors], ...]:
    """Pairs (below, above) of types sharing a facet invisible below, visible above."""
    visible, invisible = _pairing(q)
    covers = []
    for facet, below in invisible.items():
        above = visible.get(facet)
        if above is not None:
            covers.append((below, above))
    return tuple(sorted(covers))


def validate(q: Cubillage):
    """None when q satisfies all structural tiling conditions, else a diagnostic.

    Checked: (i) the type map is a bijection onto the d-subsets of the colors,
    (ii) facet pairing: every invisible facet is a back boundary plate or the
    visible facet of exactly one other cube, and symmetrically, (iii) the
    facet-induced precedence relation is acyclic, (iv) the vertex count is
    C(n, <=d).
    """
    n, d = q.n, q.d
    if n < d:
        return f"fewer colors ({n}) than the dimension ({d})"
    expected = {colorset(t) for t in subsets(q.colors, d)}
    have = set(q._root_by_type)
    if have != expected:
        missing = sorted(expected - have)
        extra = sorted(have - expected)
        return f"type map is not a bijection (missing {missing[:3]}, extra {extra[:3]})"
    for typ, root in q._root_by_type.items():
        if inter(root, typ) or any(c not in set(q.colors) for c in root):
            return f"cube {typ} has invalid root {root}"
    try:
        visible, invisible = _pairing(q)
    except CubillageError as exc:
        return str(exc)
    front = boundary_plates(q.colors, d, "front")
    back = boundary_plates(q.colors, d, "back")
    for facet, typ in invisible.items():
        if facet not in back and facet not in visible:
            return f"invisible facet {facet} of cube {typ} is unmatched"
    for facet, typ in visible.items():
        if facet not in front and facet not in invisible:
            return f"visible facet {facet} of cube {typ} is unmatched"
    for plate in front:
        if plate not in visible:
            return f"front plate {plate} not covered"
    for plate in back:
        if plate not in invisible:
            return f"back plate {plate} not covered"
    # acyclicity by Kahn elimination on the cover digraph
    indeg = {t: 0 for t in q._root_by_type}
    succs = {t: [] for t in q._root_by_type}
    for below, above in cover_relations(q):
        succs[below].append(above)
        indeg[above] += 1
    queue = [t for t, k in indeg.items() if k == 0]
    done = 0
    while queue:
        t = queue.pop()
        done += 1
        for s in succs[t]:
            indeg[s] -= 1
            if indeg[s] == 0:
                queue.append(s)
    if done != len(indeg):
        return "precedence relation between cubes has a cycle"
    want = sum(comb(n, k) for k in range(d + 1))
    if len(q.vertices()) != want:
        return f"vertex count {len(q.vertices())} != C({n},<={d}) = {want}"
    return None


def is_valid(q: Cubillage) -> bool:
    return validate(q) is None


def edge_graph(q: Cubillage) -> dict[Colors, set[tuple[int, Colors]]]:
    """Directed edges spectrum -> (color, spectrum+color) along cube edges."""
    out: dict[Colors, set] = {}
    for typ, root in q._root_by_type.items():
        for k in range(len(typ) + 1):
            for s in itertools.combinations(typ, k):
                base = union(root, s)
                for i in typ:
                    if i not in s:
                        out.setdefault(base, set()).add((i, add(base, i)))
    for v in q.vertices():
        out.setdefault(v, set())
    return out


def snakes(q: Cubillage):
    """All maximal monotone edge paths from the bottom to the top vertex,
    each reported as the sequence of edge colors."""
    graph = edge_graph(q)
    top = q.colors
    results = []
    stack = [((), ())]
    while stack:
        spec, path = stack.pop()
        if spec == top:
            results.append(path)
            continue
        for i, nxt in sorted(graph[spec]):
            stack.append((nxt, path + (i,)))
    return sorted(results)


def standard(colors, d: int) -> Cubillage:
    """The standard cubillage: repeated top-color expansion along the back."""
    cs = colorset(colors)
    if len(cs) < d or d < 1:
        raise ValueError(f"standard cubillage needs |colors| >= d >= 1, got {cs}, d={d}")
    if len(cs) == d:
        return Cubillage(cs, d, [((), cs)])
    m = cs[-1]
    inner = standard(cs[:-1], d)
    return expand(inner, inner.types(), m)


def antistandard(colors, d: int) -> Cubillage:
    """The antistandard cubillage: repeated top-color expansion along the front."""
    cs = colorset(colors)
    if len(cs) < d or d < 1:
        raise ValueError(f"antistandard cubillage needs |colors| >= d >= 1, got {cs}, d={d}")
    if len(cs) == d:
        return Cubillage(cs, d, [((), cs)])
    m = cs[-1]
    inner = antistandard(cs[:-1], d)
    return expand(inner, [], m)


class Reduction(NamedTuple):
    cubillage: Cubillage
    seam: frozenset[Facet]
    below: frozenset[Colors]


def partition(q: Cubillage, i: int) -> tuple[Cube, ...]:
    """All cubes whose type contains color i; always C(n-1,d-1) of them."""
    if i not in set(q.colors):
        raise ValueError(f"color {i} not in {q.colors}")
    return tuple(c for c in q.cubes if i in set(c.type))


def tunnel(q: Cubillage, dset) -> tuple[Cube, ...]:
    """All cubes whose type contains the fixed (d-1)-set; n-d+1 of them."""
    ds = set(colorset(dset))
    return tuple(c for c in q.cubes if ds <= set(c.type))


def reduce(q: Cubillage, i: int) -> Reduction:
    """Delete color i: drop its partition and close the gap.

    Kept cubes lose i from their root when present; the seam records where
    the partition collapsed and below lists the kept types that stayed in
    front of it.  For the top color the seam is a membrane of the result.
    """
    if i not in set(q.colors):
        raise ValueError(f"color {i} not in {q.colors}")
    kept = []
    seam = set()
    below = set()
    for typ, root in q._root_by_type.items():
        if i in set(typ):
            seam.add(Facet(minus(root, (i,)), minus(typ, (i,))))
        else:
            kept.append((minus(root, (i,)), typ))
            if i not in set(root):
                below.add(typ)
    out = Cubillage(minus(q.colors, (i,)), q.d, kept)
    return Reduction(out, frozenset(seam), frozenset(below))


def expand(q: Cubillage, stack, i: int) -> Cubillage:
    """Insert a new top color i by pushing apart the membrane over the stack.

    The stack must be a downward closed set of types of q and i must exceed
    every existing color.  Cubes in the stack keep their roots, the rest gain
    i, and each membrane plate grows into a new cube of type plate+i.
    """
    from .order import membrane_of_stack, natural_order

    if q.colors and i <= q.colors[-1]:
        raise ValueError(f"expansion color {i} must exceed max color {q.colors[-1]}")
    stack = frozenset(colorset(t) for t in stack)
    order = natural_order(q)
    if not order.is_ideal(stack):
        raise ValueError("stack is not a downward closed set of cube types")
    plates = membrane_of_stack(q, stack)
    cubes = []
    for typ, root in q._root_by_type.items():
        cubes.append((root if typ in stack else add(root, i), typ))
    for plate in plates:
        cubes.append((plate.root, add(plate.type, i)))
    return Cubillage(add(q.colors, i), q.d, cubes)


def expand_at_back(q: Cubillage, i: int) -> Cubillage:
    """One-element lifting gluing the new color-i layer to the v_i-invisible
    boundary; works for any fresh i, not just a maximal one.  Old cubes keep
    their roots, so all existing vertex spectra survive."""
    if i in set(q.colors):
        raise ValueError(f"color {i} already present")
    cubes = [(root, typ) for typ, root in q._root_by_type.items()]
    for j in subsets(q.colors, q.d - 1):
        even_i = is_even(i, j)
        root = tuple(c for c in q.colors if c not in j and c != i and is_even(c, j) == even_i)
        cubes.append((root, add(colorset(j), i)))
    return Cubillage(add(q.colors, i), q.d, cubes)


def expand_at_front(q: Cubillage, i: int) -> Cubillage:
    """Mirror of expand_at_back: glue the new layer to the v_i-visible
    boundary; every old vertex spectrum is shifted by +{i}."""
    if i in set(q.colors):
        raise ValueError(f"color {i} already present")
    cubes = [(add(root, i), typ) for typ, root in q._root_by_type.items()]
    for j in subsets(q.colors, q.d - 1):
        even_i = is_even(i, j)
        root = tuple(c for c in q.colors if c not in j and c != i and is_even(c, j) != even_i)
        cubes.append((root, add(colorset(j), i)))
    return Cubillage(add(q.colors, i), q.d, cubes)


def point_cubillage(d: int) -> Cubillage:
    """The empty cubillage over no colors; seed for embeddings."""
    return Cubillage((), d, [])


def embed_subcubillage(q_t: Cubillage, x, colors) -> Cubillage:
    """Grow a cubillage of Z(colors,d) containing the translate of q_t by x.

    x must be disjoint from q_t's colors and x ∪ colors(q_t) ⊆ colors.  Fresh
    colors outside x are inserted at the back (roots preserved), colors of x
    at the front (roots all gain the color), so every cube (r,t) of q_t ends
    up as (x ∪ r, t) and every spectrum x ∪ s occurs in the result.
    """
    xs = colorset(x)
    cs = colorset(colors)
    w = set(q_t.colors)
    if w & set(xs):
        raise ValueError("x must avoid the colors of the embedded cubillage")
    if not (w | set(xs)) <= set(cs):
        raise ValueError("x and the embedded colors must lie inside the target colors")
    free = [c for c in cs if c not in w and c not in set(xs)]
    if free:
        i = free[-1]
        return expand_at_back(embed_subcubillage(q_t, xs, minus(cs, (i,))), i)
    if xs:
        i = xs[-1]
        return expand_at_front(embed_subcubillage(q_t, xs[:-1], minus(cs, (i,))), i)
    return q_t


def contract(q: Cubillage, i: int) -> Cubillage:
    """Project the color-i partition one dimension down.

    Guaranteed to be a cubillage of Z(colors-i, d-1) when i is the top color;
    for lower colors the result is returned unvalidated.
    """
    if i not in set(q.colors):
        raise ValueError(f"color {i} not in {q.colors}")
    cubes = [(c.root, minus(c.type, (i,))) for c in partition(q, i)]
    return Cubillage(minus(q.colors, (i,)), q.d - 1, cubes)


def central_symmetry(q: Cubillage) -> Cubillage:
    """The image of the cubillage under the point symmetry of the zonotope."""
    full = set(q.colors)
    cubes = [(tuple(sorted(full - set(c.root) - set(c.type))), c.type) for c in q.cubes]
    return Cubillage(q.colors, q.d, cubes)
