"""The six isomorphism structures, pointed sets, covering, and rel.

A structure kind maps a matroid to a subset family (bases, nonbases,
independent sets, circuits, flats, or hyperplanes).  A pointed set is a
(member set, chosen element) pair; `rel` compares two pointed sets into
{0,1,2,3} by (same set?, same point?).

`covers` evaluates the definition (every ground element lies in some
member) and, for the bases / circuits / nonbases kinds, additionally
evaluates an independent characterization; the two must agree.
"""

from __future__ import annotations

from enum import Enum
from math import comb
from typing import Dict, List, NamedTuple, Optional, Tuple

from .bitset import elements_of, full_mask, iter_bits
from .errors import InvariantViolation, UnsupportedKind
from .matroid import Matroid


class IsoStructure(str, Enum):
    BASES = "bases"
    NONBASES = "nonbases"
    INDEPENDENT = "independent"
    CIRCUITS = "circuits"
    FLATS = "flats"
    HYPERPLANES = "hyperplanes"

    @classmethod
    def parse(cls, name: str) -> "IsoStructure":
        try:
            return cls(name.lower())
        except ValueError:
            raise UnsupportedKind(
                f"unknown structure {name!r}; pick one of "
                + ", ".join(k.value for k in cls)
            ) from None


class PointedSet(NamedTuple):
    members: int  # subset mask
    point: int  # element of the subset

    def to_json(self) -> Dict[str, object]:
        return {"set": elements_of(self.members), "point": self.point}


def structure_sets(m: Matroid, kind: IsoStructure) -> Tuple[int, ...]:
    """The subset family of the given kind, canonically ordered (cached)."""
    key = ("structure", kind)
    if key in m._cache:
        return m._cache[key]
    if kind is IsoStructure.BASES:
        fam = m.bases
    elif kind is IsoStructure.NONBASES:
        fam = m.nonbases()
    elif kind is IsoStructure.INDEPENDENT:
        fam = m.independent_sets()
    else:
        rep = m.derived_sets()
        fam = {
            IsoStructure.CIRCUITS: rep.circuits,
            IsoStructure.FLATS: rep.flats,
            IsoStructure.HYPERPLANES: rep.hyperplanes,
        }[kind]
    m._cache[key] = fam
    return fam


def pointed_sets(m: Matroid, kind: IsoStructure) -> Tuple[PointedSet, ...]:
    """All (member set, point) pairs, ordered by set (colex) then point."""
    key = ("pointed", kind)
    if key in m._cache:
        return m._cache[key]
    out = tuple(
        PointedSet(a, p)
        for a in structure_sets(m, kind)
        for p in iter_bits(a)
    )
    m._cache[key] = out
    return out


def rel(a: PointedSet, b: PointedSet) -> int:
    """Four-valued comparison: 0 equal, 1 same point, 2 same set, 3 neither."""
    if a.members == b.members:
        return 0 if a.point == b.point else 2
    return 1 if a.point == b.point else 3


class CoverResult(NamedTuple):
    covered: bool
    witness: Optional[int]  # an uncovered element when covered is False


def covers(m: Matroid, kind: IsoStructure) -> CoverResult:
    """Does every ground element lie in some member of the family?

    For bases, circuits and nonbases the answer is recomputed through the
    rank-function characterization (no loops / no coloops / the free
    extension or coloop-plus-uniform split) and must agree.
    """
    union = 0
    for a in structure_sets(m, kind):
        union |= a
    missing = full_mask(m.n) & ~union
    by_definition = missing == 0
    witness = None if by_definition else (missing & -missing).bit_length() - 1

    by_char = None
    if kind is IsoStructure.BASES:
        by_char = all(m.subset_rank(1 << e) == 1 for e in range(m.n))
    elif kind is IsoStructure.CIRCUITS:
        ground = full_mask(m.n)
        by_char = all(
            m.subset_rank(ground ^ (1 << e)) == m.rank for e in range(m.n)
        )
    elif kind is IsoStructure.NONBASES:
        by_char = not any(_nonbases_miss(m, e) for e in range(m.n))
    if by_char is not None and by_char != by_definition:
        raise InvariantViolation(
            f"covering disagreement for {kind.value}: definition says "
            f"{by_definition}, characterization says {by_char}"
        )
    return CoverResult(by_definition, witness)


def _nonbases_miss(m: Matroid, e: int) -> bool:
    """Is element e outside every nonbasis, per the two structural cases?

    Either deleting e leaves a paving matroid of full rank whose free
    extension by e recovers m, or e is a coloop over a uniform remainder.
    """
    rest = m.delete(1 << e)
    if rest.rank == m.rank:
        if not rest.is_paving():
            return False
        return _free_extension_matches(m, rest, e)
    if rest.rank == m.rank - 1:
        # e lies in every basis; remainder must be uniform
        return len(rest.bases) == comb(rest.n, rest.rank)
    return False


def _free_extension_matches(m: Matroid, rest: Matroid, e: int) -> bool:
    # bases of m must be exactly: bases avoiding e, plus every
    # (rank-1)-independent of the deletion joined with e
    keep = [x for x in range(m.n) if x != e]
    expected = set()
    for b in rest.bases:
        expected.add(_unshift(b, keep))
    seen_corank1 = {b ^ (1 << i) for b in rest.bases for i in iter_bits(b)}
    for a in seen_corank1:
        expected.add(_unshift(a, keep) | (1 << e))
    return expected == set(m.bases)


def _unshift(mask: int, keep: List[int]) -> int:
    out = 0
    for i in iter_bits(mask):
        out |= 1 << keep[i]
    return out
