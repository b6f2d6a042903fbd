"""Relation colored graphs and their isomorphism / automorphism search.

Vertices are the pointed sets of a (matroid, structure) pair; two
vertices are joined when their rel value is 1 (same point) or 2 (same
set), with that value as the edge color.  Vertex pairs with rel 3 are
non-edges, so a bijection preserves rel on all pairs exactly when it
preserves both colored adjacencies.

The search is equitable color refinement on aligned cell pairs followed
by individualize-and-refine backtracking on the smallest non-singleton
cell.  Branch order is canonical (ascending vertex index), so the first
solution found is the canonically least one and results are
deterministic.  Leaves are verified against the full adjacency before
being accepted.
"""

from __future__ import annotations

import warnings
from typing import Dict, List, Optional, Sequence, Tuple

from .bitset import iter_bits, size
from .errors import GuardExceeded, NotInduced
from .matroid import Matroid
from .structures import IsoStructure, PointedSet, covers, pointed_sets, rel

GROUP_ENUM_CAP = 20_000


class RelColoredGraph:
    """Colored graph on pointed sets with per-color adjacency bitsets."""

    def __init__(self, vertices: Sequence[PointedSet]):
        self.vertices = tuple(vertices)
        n = len(self.vertices)
        self.n = n
        adj1 = [0] * n
        adj2 = [0] * n
        for i in range(n):
            vi = self.vertices[i]
            for j in range(i + 1, n):
                r = rel(vi, self.vertices[j])
                if r == 1:
                    adj1[i] |= 1 << j
                    adj1[j] |= 1 << i
                elif r == 2:
                    adj2[i] |= 1 << j
                    adj2[j] |= 1 << i
        self.adj1 = adj1
        self.adj2 = adj2

    def rel_of(self, i: int, j: int) -> int:
        if i == j:
            return 0
        if self.adj1[i] >> j & 1:
            return 1
        if self.adj2[i] >> j & 1:
            return 2
        return 3

    def edges(self, color: int) -> List[Tuple[int, int]]:
        adj = self.adj1 if color == 1 else self.adj2
        return [(i, j) for i in range(self.n) for j in iter_bits(adj[i]) if i < j]

    def color_adjacency_matrix(self, color: int):
        """Dense 0/1 matrix of one edge color (rows/cols in vertex order)."""
        import numpy as np

        a = np.zeros((self.n, self.n), dtype=np.int8)
        for i, j in self.edges(color):
            a[i, j] = a[j, i] = 1
        return a


def build_graph(
    m: Matroid, kind: IsoStructure, warn_uncovered: bool = True
) -> RelColoredGraph:
    """The relation colored graph of (m, kind)."""
    if warn_uncovered and not covers(m, kind).covered:
        warnings.warn(
            f"{kind.value} does not cover the matroid; the graph loses elements",
            stacklevel=2,
        )
    return RelColoredGraph(pointed_sets(m, kind))


def bipartite_graph(m: Matroid, kind: IsoStructure):
    """Element-vs-member incidence graph: nodes, and (element, member) edges."""
    from .structures import structure_sets

    fam = structure_sets(m, kind)
    edges = [(e, a) for a in fam for e in iter_bits(a)]
    return {"elements": list(range(m.n)), "members": list(fam), "edges": edges}


def line_graph(m: Matroid, kind: IsoStructure):
    """Uncolored version of the relation graph (edges with rel in {1, 2})."""
    g = build_graph(m, kind, warn_uncovered=False)
    return {
        "vertices": [v.to_json() for v in g.vertices],
        "edges": sorted(g.edges(1) + g.edges(2)),
    }


# -- search ------------------------------------------------------------------

Cell = Tuple[int, int]  # (bitset of G-vertices, bitset of H-vertices)


class _PairSearch:
    """Backtracking isomorphism search between two colored graphs."""

    def __init__(self, g: RelColoredGraph, h: RelColoredGraph):
        self.g = g
        self.h = h

    def _refine(self, cells: List[Cell]) -> Optional[List[Cell]]:
        g, h = self.g, self.h
        while True:
            changed = False
            new_cells: List[Cell] = []
            for gm, hm in cells:
                if gm.bit_count() == 1 and hm.bit_count() == 1:
                    new_cells.append((gm, hm))
                    continue
                buckets: Dict[tuple, List[int]] = {}
                for v in iter_bits(gm):
                    a1, a2 = g.adj1[v], g.adj2[v]
                    sig = tuple(
                        ((a1 & cg).bit_count(), (a2 & cg).bit_count())
                        for cg, _ in cells
                    )
                    slot = buckets.setdefault(sig, [0, 0])
                    slot[0] |= 1 << v
                for w in iter_bits(hm):
                    a1, a2 = h.adj1[w], h.adj2[w]
                    sig = tuple(
                        ((a1 & ch).bit_count(), (a2 & ch).bit_count())
                        for _, ch in cells
                    )
                    slot = buckets.setdefault(sig, [0, 0])
                    slot[1] |= 1 << w
                for sig in buckets:
                    bg, bh = buckets[sig]
                    if bg.bit_count() != bh.bit_count():
                        return None
                if len(buckets) > 1:
                    changed = True
                for sig in sorted(buckets):
                    bg, bh = buckets[sig]
                    new_cells.append((bg, bh))
            cells = new_cells
            if not changed:
                return cells

    def _initial_cells(self, prescribed: Sequence[Tuple[int, int]]) -> List[Cell]:
        rest_g = (1 << self.g.n) - 1
        rest_h = (1 << self.h.n) - 1
        cells: List[Cell] = []
        for gv, hv in prescribed:
            cells.append((1 << gv, 1 << hv))
            rest_g &= ~(1 << gv)
            rest_h &= ~(1 << hv)
        if rest_g or rest_h:
            cells.append((rest_g, rest_h))
        return cells

    def _verify(self, mapping: List[int]) -> bool:
        g, h = self.g, self.h
        for v in range(g.n):
            img1 = 0
            for u in iter_bits(g.adj1[v]):
                img1 |= 1 << mapping[u]
            if img1 != h.adj1[mapping[v]]:
                return False
            img2 = 0
            for u in iter_bits(g.adj2[v]):
                img2 |= 1 << mapping[u]
            if img2 != h.adj2[mapping[v]]:
                return False
        return True

    def run(
        self,
        prescribed: Sequence[Tuple[int, int]] = (),
        limit: Optional[int] = 1,
    ) -> List[Tuple[int, ...]]:
        """Collect isomorphisms (up to `limit`; None means all)."""
        if self.g.n != self.h.n:
            return []
        if self.g.n == 0:
            return [()]
        found: List[Tuple[int, ...]] = []
        cells0 = self._refine(self._initial_cells(prescribed))

        def descend(cells: List[Cell]) -> bool:
            # returns True when the limit has been reached
            branch_at = -1
            branch_size = 0
            for ci, (gm, hm) in enumerate(cells):
                c = gm.bit_count()
                if c > 1 and (branch_at < 0 or c < branch_size):
                    branch_at = ci
                    branch_size = c
            if branch_at < 0:
                mapping = [0] * self.g.n
                for gm, hm in cells:
                    mapping[gm.bit_length() - 1] = hm.bit_length() - 1
                if self._verify(mapping):
                    found.append(tuple(mapping))
                    if limit is not None and len(found) >= limit:
                        return True
                return False
            gm, hm = cells[branch_at]
            v = (gm & -gm).bit_length() - 1
            rest_g = gm & ~(1 << v)
            for w in iter_bits(hm):
                rest_h = hm & ~(1 << w)
                trial = list(cells)
                trial[branch_at : branch_at + 1] = [
                    (1 << v, 1 << w),
                    (rest_g, rest_h),
                ]
                refined = self._refine(trial)
                if refined is not None and descend(refined):
                    return True
            return False

        if cells0 is not None:
            descend(cells0)
        return found


def find_isomorphism(
    g: RelColoredGraph, h: RelColoredGraph
) -> Optional[Tuple[int, ...]]:
    """A rel-preserving vertex bijection g -> h, or None (exhaustive)."""
    res = _PairSearch(g, h).run(limit=1)
    return res[0] if res else None


def find_all(
    g: RelColoredGraph, h: RelColoredGraph, limit: Optional[int] = None
) -> List[Tuple[int, ...]]:
    """All rel-preserving bijections, canonically ordered, up to `limit`."""
    return sorted(_PairSearch(g, h).run(limit=limit))


def matroid_iso_from_graph_iso(
    m: Matroid,
    n: Matroid,
    kind: IsoStructure,
    mapping: Sequence[int],
) -> Tuple[int, ...]:
    """Extract the ground-set bijection inducing a vertex bijection.

    The vertex map must send (A, p) to (phi(A), phi(p)) for a single
    ground map phi; anything else raises NotInduced (which would
    contradict the rel-preservation hypothesis).
    """
    vm = pointed_sets(m, kind)
    vn = pointed_sets(n, kind)
    phi: Dict[int, int] = {}
    for i, ps in enumerate(vm):
        img = vn[mapping[i]]
        prev = phi.get(ps.point)
        if prev is None:
            phi[ps.point] = img.point
        elif prev != img.point:
            raise NotInduced(
                f"point {ps.point} maps to both {prev} and {img.point}"
            )
    if len(phi) != m.n or m.n != n.n:
        raise NotInduced("vertex map does not determine a total ground map")
    if sorted(phi.values()) != list(range(n.n)):
        raise NotInduced("induced ground map is not a bijection")
    out = tuple(phi[e] for e in range(m.n))
    # the induced map must carry the structure family across
    from .structures import structure_sets

    fam_n = set(structure_sets(n, kind))
    for a in structure_sets(m, kind):
        img = 0
        for e in iter_bits(a):
            img |= 1 << out[e]
        if img not in fam_n:
            raise NotInduced(f"family member {a:#x} maps outside the family")
    if len(structure_sets(m, kind)) != len(fam_n):
        raise NotInduced("family sizes differ")
    return out


def find_matroid_isomorphism(
    m: Matroid, n: Matroid, kind: IsoStructure
) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Matroid isomorphism via graph search plus ground-map extraction.

    Returns (ground map, vertex map) or None.  The pointed game never
    sees the empty set, so when the two families differ exactly there
    (flats of an all-loop matroid versus a loop-free one) the graphs can
    agree while the matroids do not; the extraction step compares the
    full families and turns that into a clean negative.  Any other
    extraction failure is a real inconsistency and propagates.
    """
    from .structures import structure_sets

    gm = build_graph(m, kind, warn_uncovered=False)
    gn = build_graph(n, kind, warn_uncovered=False)
    mapping = find_isomorphism(gm, gn)
    if mapping is None:
        return None
    try:
        return matroid_iso_from_graph_iso(m, n, kind, mapping), mapping
    except NotInduced:
        empty_m = 0 in structure_sets(m, kind)
        empty_n = 0 in structure_sets(n, kind)
        if empty_m != empty_n:
            return None
        raise


class AutomorphismGroup:
    """Generators plus exact order from an orbit-stabilizer chain."""

    def __init__(self, generators: List[Tuple[int, ...]], order: int, base: List[int]):
        self.generators = generators
        self.order = order
        self.base = base

    def elements(self, cap: int = GROUP_ENUM_CAP) -> List[Tuple[int, ...]]:
        """Every group element via closure of the generators (guarded)."""
        if self.order > cap:
            raise GuardExceeded(f"group order {self.order} exceeds cap {cap}")
        n_pts = len(self.generators[0]) if self.generators else 0
        identity = tuple(range(n_pts))
        seen = {identity}
        frontier = [identity]
        while frontier:
            cur = frontier.pop()
            for g in self.generators:
                nxt = tuple(g[cur[i]] for i in range(n_pts))
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        if len(seen) != self.order:
            raise GuardExceeded(
                f"generator closure gave {len(seen)} elements, chain said {self.order}"
            )
        return sorted(seen)

    def to_json(self) -> Dict[str, object]:
        return {
            "generators": [list(g) for g in self.generators],
            "order": str(self.order),
        }


def automorphism_group(g: RelColoredGraph) -> AutomorphismGroup:
    """Stabilizer chain over vertices in canonical order."""
    search = _PairSearch(g, g)
    fixed: List[int] = []
    gens: List[Tuple[int, ...]] = []
    order = 1
    if g.n == 0:
        return AutomorphismGroup([], 1, [])
    while True:
        cells = search._refine(search._initial_cells([(f, f) for f in fixed]))
        if cells is None:
            raise NotInduced("self-refinement failed; graph data is inconsistent")
        target = -1
        tsize = 0
        for ci, (gm, hm) in enumerate(cells):
            c = gm.bit_count()
            if c > 1 and (target < 0 or c < tsize):
                target = ci
                tsize = c
        if target < 0:
            break
        gm, hm = cells[target]
        b = (gm & -gm).bit_length() - 1
        orbit = 1 << b
        level_gens: List[Tuple[int, ...]] = []

        def close_orbit(orbit: int) -> int:
            while True:
                grew = False
                for perm in level_gens:
                    img = 0
                    for v in iter_bits(orbit):
                        img |= 1 << perm[v]
                    if img & ~orbit:
                        orbit |= img
                        grew = True
                if not grew:
                    return orbit

        prescribed_prefix = [(f, f) for f in fixed]
        for w in iter_bits(hm):
            if orbit >> w & 1:
                continue
            res = search.run(prescribed=prescribed_prefix + [(b, w)], limit=1)
            if res:
                level_gens.append(res[0])
                orbit = close_orbit(orbit | (1 << w))
        order *= orbit.bit_count()
        gens.extend(level_gens)
        fixed.append(b)
    return AutomorphismGroup(gens, order, fixed)


def disjoint_automorphism_pair(
    g: RelColoredGraph,
    group: Optional[AutomorphismGroup] = None,
    cap: int = GROUP_ENUM_CAP,
) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """Two nontrivial automorphisms with disjoint moved-vertex supports.

    Scans the full group (guarded by `cap`), trying involution pairs
    first so that certificates compose to a Klein four-group when
    possible.  Returns the canonically least pair found, or None after
    an exhaustive scan.
    """
    if group is None:
        group = automorphism_group(g)
    if group.order == 1:
        return None
    elems = group.elements(cap)
    identity = tuple(range(g.n))
    nontrivial = [p for p in elems if p != identity]
    moved = []
    for p in nontrivial:
        mask = 0
        for i, x in enumerate(p):
            if x != i:
                mask |= 1 << i
        moved.append(mask)

    def scan(indices: List[int]) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        for ii, i in enumerate(indices):
            for j in indices[ii + 1 :]:
                if moved[i] & moved[j] == 0:
                    return (nontrivial[i], nontrivial[j])
        return None

    involutions = [
        i
        for i, p in enumerate(nontrivial)
        if all(p[p[v]] == v for v in range(g.n))
    ]
    hit = scan(involutions)
    if hit is None:
        hit = scan(list(range(len(nontrivial))))
    return hit
