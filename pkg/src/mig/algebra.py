"""Relation-ideal export, quantum-isomorphism screeners, and
noncommutativity certificates.

Exports are presentations of the two isomorphism algebras as text
bundles: the generic magic-unitary relations of the variable grid plus
the game-specific generators (rel-mismatch products on the pointed grid,
tuple products on the ground grid).  Bundles stream their relations, so
large grids never materialize in memory.

Screeners are necessary conditions only: a failed check certifies
"not quantum isomorphic"; passing is inconclusive.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .bitset import iter_bits, size
from .errors import GuardExceeded, NotCovering, UnsupportedKind
from .matroid import Matroid
from .relgraph import (
    automorphism_group,
    build_graph,
    disjoint_automorphism_pair,
)
from .structures import (
    IsoStructure,
    PointedSet,
    covers,
    pointed_sets,
    rel,
    structure_sets,
)

Term = Tuple[int, Tuple[Tuple[int, int], ...]]  # coefficient, variable factors
Relation = Tuple[Term, ...]

TUPLE_SPACE_GUARD = 2_000_000


def _monomial(*factors: Tuple[int, int]) -> Relation:
    return ((1, tuple(factors)),)


class RelationBundle:
    """A variable grid plus a lazily generated list of relations."""

    def __init__(
        self,
        grid_kind: str,  # "POINTED" or "GROUNDSET"
        symbol: str,  # "u" or "w"
        rows: int,
        cols: int,
        row_legend: Sequence[object],
        col_legend: Sequence[object],
        relation_groups: Sequence[Tuple[str, callable]],
    ):
        self.grid_kind = grid_kind
        self.symbol = symbol
        self.rows = rows
        self.cols = cols
        self.row_legend = list(row_legend)
        self.col_legend = list(col_legend)
        self._groups = list(relation_groups)

    def iter_relations(self) -> Iterator[Relation]:
        for _, gen in self._groups:
            yield from gen()

    def group_counts(self) -> Dict[str, int]:
        return {name: sum(1 for _ in gen()) for name, gen in self._groups}

    def count(self) -> int:
        return sum(self.group_counts().values())

    def relation_text(self, relation: Relation) -> str:
        parts = []
        for pos, (coeff, factors) in enumerate(relation):
            mono = "".join(f"{self.symbol}[{i}][{j}]" for i, j in factors)
            c = abs(coeff)
            body = mono if mono else "1"
            if c != 1 or not mono:
                body = f"{c}{mono}" if mono else str(c)
            if pos == 0:
                parts.append(body if coeff > 0 else f"-{body}")
            else:
                parts.append(f"+ {body}" if coeff > 0 else f"- {body}")
        return " ".join(parts)

    def write(self, fp) -> None:
        fp.write(f"grid {self.grid_kind} {self.rows} {self.cols}\n")
        for i in range(max(self.rows, self.cols)):
            legend = {
                "row": self.row_legend[i] if i < self.rows else None,
                "col": self.col_legend[i] if i < self.cols else None,
            }
            fp.write(f"legend {i} {json.dumps(legend, sort_keys=True)}\n")
        for relation in self.iter_relations():
            fp.write(self.relation_text(relation) + "\n")

    def to_text(self) -> str:
        import io

        buf = io.StringIO()
        self.write(buf)
        return buf.getvalue()


_FACTOR_RE = re.compile(r"\w\[(\d+)\]\[(\d+)\]")


def parse_bundle(text: str) -> Dict[str, object]:
    """Parse a bundle back into grid info and relation term lists."""
    lines = text.splitlines()
    if not lines or not lines[0].startswith("grid "):
        raise ValueError("missing grid header")
    _, kind, rows, cols = lines[0].split()
    legends: Dict[int, object] = {}
    relations: List[Relation] = []
    for line in lines[1:]:
        if not line.strip():
            continue
        if line.startswith("legend "):
            _, idx, payload = line.split(" ", 2)
            legends[int(idx)] = json.loads(payload)
            continue
        relations.append(_parse_relation(line))
    return {
        "kind": kind,
        "rows": int(rows),
        "cols": int(cols),
        "legends": legends,
        "relations": relations,
    }


def _parse_relation(line: str) -> Relation:
    tokens = line.replace("- ", "-").replace("+ ", "+").split()
    terms: List[Term] = []
    for tok in tokens:
        sign = 1
        if tok.startswith("-"):
            sign, tok = -1, tok[1:]
        elif tok.startswith("+"):
            tok = tok[1:]
        m = re.match(r"^(\d+)?((?:\w\[\d+\]\[\d+\])*)$", tok)
        if not m:
            raise ValueError(f"bad term {tok!r}")
        coeff = int(m.group(1)) if m.group(1) else 1
        factors = tuple(
            (int(a), int(b)) for a, b in _FACTOR_RE.findall(m.group(2) or "")
        )
        terms.append((sign * coeff, factors))
    return tuple(terms)


def _magic_unitary_groups(rows: int, cols: int) -> List[Tuple[str, callable]]:
    """The generic relations of an rows x cols grid of projection variables."""

    def idempotents() -> Iterator[Relation]:
        for i in range(rows):
            for j in range(cols):
                yield ((1, ((i, j), (i, j))), (-1, ((i, j),)))

    def row_orthogonality() -> Iterator[Relation]:
        for i in range(rows):
            for j in range(cols):
                for k in range(cols):
                    if j != k:
                        yield _monomial((i, j), (i, k))

    def col_orthogonality() -> Iterator[Relation]:
        for j in range(cols):
            for i in range(rows):
                for k in range(rows):
                    if i != k:
                        yield _monomial((i, j), (k, j))

    def row_sums() -> Iterator[Relation]:
        for i in range(rows):
            yield ((1, ()),) + tuple((-1, ((i, j),)) for j in range(cols))

    def col_sums() -> Iterator[Relation]:
        for j in range(cols):
            yield ((1, ()),) + tuple((-1, ((i, j),)) for i in range(rows))

    return [
        ("idempotent", idempotents),
        ("rowOrthogonality", row_orthogonality),
        ("colOrthogonality", col_orthogonality),
        ("rowSums", row_sums),
        ("colSums", col_sums),
    ]


def export_pointed_relations(
    m: Matroid, n: Matroid, kind: IsoStructure
) -> RelationBundle:
    """Magic-unitary relations on the pointed grid plus rel-mismatch products."""
    for label, mat in (("first", m), ("second", n)):
        res = covers(mat, kind)
        if not res.covered:
            raise NotCovering(
                f"{kind.value} misses element {res.witness} of the {label} matroid"
            )
    ps_m = pointed_sets(m, kind)
    ps_n = pointed_sets(n, kind)

    def mismatches() -> Iterator[Relation]:
        for ai, a in enumerate(ps_m):
            for bi, b in enumerate(ps_m):
                r_ab = rel(a, b)
                for xi, x in enumerate(ps_n):
                    for yi, y in enumerate(ps_n):
                        if rel(x, y) != r_ab:
                            yield _monomial((ai, xi), (bi, yi))

    groups = _magic_unitary_groups(len(ps_m), len(ps_n)) + [
        ("relMismatch", mismatches)
    ]
    return RelationBundle(
        "POINTED",
        "u",
        len(ps_m),
        len(ps_n),
        [p.to_json() for p in ps_m],
        [p.to_json() for p in ps_n],
        groups,
    )


# -- ground-set tuple bundles --------------------------------------------------

_TUPLE_KINDS = (
    IsoStructure.INDEPENDENT,
    IsoStructure.BASES,
    IsoStructure.NONBASES,
    IsoStructure.CIRCUITS,
    IsoStructure.HYPERPLANES,
)


def _tuple_lengths(m: Matroid, kind: IsoStructure) -> List[int]:
    if kind in (IsoStructure.BASES, IsoStructure.NONBASES):
        return [m.rank]
    if kind is IsoStructure.INDEPENDENT:
        return list(range(1, m.rank + 1))
    fam = structure_sets(m, kind)
    lengths = {size(a) for a in fam}
    if kind is IsoStructure.CIRCUITS and m.rank >= 1:
        lengths.add(2)  # the repeated-element convention for nonloops
    return sorted(lengths)


def _is_tuple_member(m: Matroid, kind: IsoStructure, tup: Tuple[int, ...]) -> bool:
    distinct = len(set(tup)) == len(tup)
    mask = 0
    for e in tup:
        mask |= 1 << e
    if kind is IsoStructure.BASES:
        return distinct and len(tup) == m.rank and m.is_independent(mask)
    if kind is IsoStructure.NONBASES:
        return len(tup) == m.rank and not (distinct and m.is_independent(mask))
    if kind is IsoStructure.INDEPENDENT:
        return distinct and m.is_independent(mask)
    if kind is IsoStructure.CIRCUITS:
        if len(tup) == 2 and tup[0] == tup[1]:
            return m.subset_rank(1 << tup[0]) == 1
        return distinct and mask in _circuit_set(m)
    if kind is IsoStructure.HYPERPLANES:
        return distinct and mask in _hyperplane_set(m)
    raise UnsupportedKind(f"{kind.value} has no tuple form")


def _circuit_set(m: Matroid) -> set:
    key = "circuit_set"
    if key not in m._cache:
        m._cache[key] = set(m.derived_sets().circuits)
    return m._cache[key]


def _hyperplane_set(m: Matroid) -> set:
    key = "hyperplane_set"
    if key not in m._cache:
        m._cache[key] = set(m.derived_sets().hyperplanes)
    return m._cache[key]


def export_groundset_relations(
    m: Matroid, n: Matroid, kind: IsoStructure
) -> RelationBundle:
    """Tuple-product generators over the ground-set variable grid.

    For each tuple length in play, the generators are the products
    w[a1][x1]...w[as][xs] over tuple pairs where exactly one side lies in
    the tuple family of its matroid.
    """
    if kind not in _TUPLE_KINDS:
        raise UnsupportedKind(f"{kind.value} is not a tuple structure")
    lengths = sorted(set(_tuple_lengths(m, kind)) | set(_tuple_lengths(n, kind)))
    for s in lengths:
        if m.n**s + n.n**s > TUPLE_SPACE_GUARD:
            raise GuardExceeded(f"tuple space at length {s} exceeds the guard")

    def tuple_products() -> Iterator[Relation]:
        for s in lengths:
            m_tuples = [
                (t, _is_tuple_member(m, kind, t))
                for t in product(range(m.n), repeat=s)
            ]
            n_tuples = [
                (t, _is_tuple_member(n, kind, t))
                for t in product(range(n.n), repeat=s)
            ]
            for ta, in_a in m_tuples:
                for tx, in_x in n_tuples:
                    if in_a != in_x:
                        yield _monomial(*zip(ta, tx))

    groups = _magic_unitary_groups(m.n, n.n) + [("tupleProducts", tuple_products)]
    return RelationBundle(
        "GROUNDSET",
        "w",
        m.n,
        n.n,
        [m.label_of(e) for e in range(m.n)],
        [n.label_of(e) for e in range(n.n)],
        groups,
    )


def export_comparison_substitution(
    m: Matroid, n: Matroid, kind: IsoStructure
) -> Dict[str, List[str]]:
    """Ground variables as sums of pointed variables (one choice per element).

    w[a][x] expands over the answers pointed at x, with the question row
    fixed to the least pointed set carrying a.
    """
    res_m, res_n = covers(m, kind), covers(n, kind)
    if not (res_m.covered and res_n.covered):
        raise NotCovering("substitution table needs a covering structure")
    ps_m = pointed_sets(m, kind)
    ps_n = pointed_sets(n, kind)
    first_with_point = {}
    for i, ps in enumerate(ps_m):
        first_with_point.setdefault(ps.point, i)
    by_point: Dict[int, List[int]] = {}
    for j, ps in enumerate(ps_n):
        by_point.setdefault(ps.point, []).append(j)
    out = {}
    for a in range(m.n):
        row = first_with_point[a]
        for x in range(n.n):
            out[f"w[{a}][{x}]"] = [f"u[{row}][{j}]" for j in by_point[x]]
    return out


# -- screeners -----------------------------------------------------------------


@dataclass
class ScreenReport:
    checks: List[Tuple[str, bool, str]]
    verdict: str

    def to_json(self) -> Dict[str, object]:
        return {
            "checks": [
                {"name": name, "passed": passed, "detail": detail}
                for name, passed, detail in self.checks
            ],
            "verdict": self.verdict,
        }


def screen_quantum_iso(
    m: Matroid,
    n: Matroid,
    kind: IsoStructure,
    allow_noncovering: bool = False,
) -> ScreenReport:
    """Necessary-condition screen; any failure rules quantum isomorphism out."""
    if not allow_noncovering:
        for label, mat in (("first", m), ("second", n)):
            res = covers(mat, kind)
            if not res.covered:
                raise NotCovering(
                    f"{kind.value} misses element {res.witness} of the {label} matroid"
                )
    checks: List[Tuple[str, bool, str]] = []

    checks.append(
        (
            "groundSetSizesEqual",
            m.n == n.n,
            f"{m.n} vs {n.n}",
        )
    )

    def size_profile(mat: Matroid) -> Dict[int, int]:
        prof: Dict[int, int] = {}
        for a in structure_sets(mat, kind):
            s = size(a)
            if s >= 1:
                prof[s] = prof.get(s, 0) + 1
        return prof

    pm, pn = size_profile(m), size_profile(n)
    checks.append(
        (
            "memberCountsBySize",
            pm == pn,
            f"{pm} vs {pn}",
        )
    )
    if kind in (IsoStructure.BASES, IsoStructure.NONBASES):
        checks.append(("ranksEqual", m.rank == n.rank, f"{m.rank} vs {n.rank}"))
    if kind is IsoStructure.CIRCUITS and m.rank == n.rank:
        pav_m, pav_n = m.is_paving(), n.is_paving()
        checks.append(
            ("pavingAgrees", pav_m == pav_n, f"{pav_m} vs {pav_n}")
        )
    ok = all(passed for _, passed, _ in checks)
    return ScreenReport(
        checks, "possibly quantum isomorphic" if ok else "not quantum isomorphic"
    )


# -- noncommutativity certificates ----------------------------------------------


def _membership_pattern(
    m: Matroid, kind: IsoStructure
) -> Optional[Tuple[int, int, int, int, int, int]]:
    """Find distinct a, b, c, d with a,b only in member A and c,d only in B."""
    fam = structure_sets(m, kind)
    memb: Dict[int, List[int]] = {e: [] for e in range(m.n)}
    for a_set in fam:
        for e in iter_bits(a_set):
            memb[e].append(a_set)
    buckets: Dict[int, List[int]] = {}
    for e in range(m.n):
        if len(memb[e]) == 1:
            buckets.setdefault(memb[e][0], []).append(e)
    keyed = sorted(buckets.items())
    for i, (set_a, elems_a) in enumerate(keyed):
        if len(elems_a) >= 4:
            a, b, c, d = elems_a[:4]
            return a, b, c, d, set_a, set_a
        if len(elems_a) < 2:
            continue
        for set_b, elems_b in keyed[i + 1 :]:
            if len(elems_b) >= 2:
                return elems_a[0], elems_a[1], elems_b[0], elems_b[1], set_a, set_b
    return None


def _transposition_vertex_perm(
    m: Matroid, kind: IsoStructure, e1: int, e2: int
) -> Tuple[int, ...]:
    ps = pointed_sets(m, kind)
    index = {p: i for i, p in enumerate(ps)}
    swap = {e1: e2, e2: e1}

    def move(p: PointedSet) -> PointedSet:
        members = p.members
        for a, b in ((e1, e2),):
            has_a = members >> a & 1
            has_b = members >> b & 1
            if has_a != has_b:
                members ^= (1 << a) | (1 << b)
        return PointedSet(members, swap.get(p.point, p.point))

    return tuple(index[move(p)] for p in ps)


def noncommutativity_certificate(
    m: Matroid, kind: IsoStructure
) -> Optional[Dict[str, object]]:
    """A verified pair of disjoint nontrivial automorphisms, if one exists.

    Tries the cheap membership pattern (two member sets, each owning two
    elements found nowhere else) before scanning the full automorphism
    group of the relation graph.
    """
    res = covers(m, kind)
    if not res.covered:
        raise NotCovering(f"{kind.value} misses element {res.witness}")
    g = build_graph(m, kind)
    pattern = _membership_pattern(m, kind)
    if pattern is not None:
        a, b, c, d, _, _ = pattern
        perm1 = _transposition_vertex_perm(m, kind, a, b)
        perm2 = _transposition_vertex_perm(m, kind, c, d)
        method = "membership-pattern"
        ground = [[a, b], [c, d]]
    else:
        hit = disjoint_automorphism_pair(g)
        if hit is None:
            return None
        perm1, perm2 = hit
        method = "group-scan"
        ground = None
    verification = _verify_disjoint_pair(g, perm1, perm2)
    if not verification["valid"]:
        return None
    cert: Dict[str, object] = {
        "method": method,
        "vertexPermutations": [list(perm1), list(perm2)],
        "verification": verification,
    }
    if ground is not None:
        cert["groundTranspositions"] = ground
    return cert


def _verify_disjoint_pair(g, perm1, perm2) -> Dict[str, object]:
    identity = tuple(range(g.n))
    moved1 = [v for v in range(g.n) if perm1[v] != v]
    moved2 = [v for v in range(g.n) if perm2[v] != v]
    disjoint = not set(moved1) & set(moved2)

    def preserves(perm) -> bool:
        for v in range(g.n):
            for w in range(v + 1, g.n):
                if g.rel_of(perm[v], perm[w]) != g.rel_of(v, w):
                    return False
        return True

    p1 = preserves(perm1)
    p2 = preserves(perm2)
    nontrivial = perm1 != identity and perm2 != identity
    return {
        "relPreserving": [p1, p2],
        "nontrivial": nontrivial,
        "disjoint": disjoint,
        "movedCounts": [len(moved1), len(moved2)],
        "valid": p1 and p2 and nontrivial and disjoint,
    }
