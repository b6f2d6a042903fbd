"""Build a matroid from its lattice of cyclic flats and their ranks.

A presentation is a family of flats (masks) that must form a lattice
under inclusion, plus a rank value per flat.  The three presentation
axioms are checked with explicit witnesses before reconstruction.  The
reconstructed rank function is

    rk(A) = min over presented flats F of  rho(F) + |A \\ F|,

and the result is cross-validated by re-deriving its cyclic flats.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Tuple

from .bitset import size, subsets_of_size
from .errors import AxiomViolation, ConstructionInconsistency, GuardExceeded
from .matroid import Matroid


@dataclass(frozen=True)
class CyclicFlatPresentation:
    n: int
    flats: Tuple[int, ...]
    rho: Dict[int, int]

    def __post_init__(self):
        object.__setattr__(self, "flats", tuple(sorted(set(self.flats))))


def _lattice_join(flats, x: int, y: int):
    ubs = [f for f in flats if (f & x) == x and (f & y) == y]
    if not ubs:
        return None
    least = ubs[0]
    for f in ubs[1:]:
        least &= f
    return least if least in ubs else None


def _lattice_meet(flats, x: int, y: int):
    lbs = [f for f in flats if (f | x) == x and (f | y) == y]
    if not lbs:
        return None
    greatest = 0
    for f in lbs:
        greatest |= f
    return greatest if greatest in lbs else None


def check_presentation(pres: CyclicFlatPresentation) -> None:
    """Verify the lattice structure and the three rank axioms."""
    flats = pres.flats
    rho = pres.rho
    if not flats:
        raise AxiomViolation(0, 0, 0, "empty family is not a lattice")
    if set(rho) != set(flats):
        raise AxiomViolation(0, 0, 0, "rank map domain differs from the family")
    joins = {}
    meets = {}
    for x in flats:
        for y in flats:
            j = _lattice_join(flats, x, y)
            w = _lattice_meet(flats, x, y)
            if j is None or w is None:
                raise AxiomViolation(0, x, y, "pair has no join or no meet")
            joins[(x, y)] = j
            meets[(x, y)] = w
    bottom = flats[0]
    for f in flats[1:]:
        bottom = meets[(bottom, f)]
    if rho[bottom] != 0:
        raise AxiomViolation(1, bottom, bottom, "minimal flat must have rank 0")
    for x in flats:
        for y in flats:
            if x != y and (x & y) == x:  # x strictly inside y
                d = rho[y] - rho[x]
                if not (0 < d < size(y & ~x)):
                    raise AxiomViolation(2, x, y)
    for i, x in enumerate(flats):
        for y in flats[i:]:
            lhs = rho[x] + rho[y]
            rhs = (
                rho[joins[(x, y)]]
                + rho[meets[(x, y)]]
                + size((x & y) & ~meets[(x, y)])
            )
            if lhs < rhs:
                raise AxiomViolation(3, x, y)


def matroid_from_cyclic_flats(
    pres: CyclicFlatPresentation,
    cross_check: bool = True,
    guard_bases: int = 5_000_000,
) -> Matroid:
    """Reconstruct the unique matroid with the presented cyclic flats."""
    check_presentation(pres)
    n = pres.n
    flats = pres.flats
    rho = pres.rho

    def rank_of(a_mask: int) -> int:
        return min(rho[f] + size(a_mask & ~f) for f in flats)

    r = rank_of((1 << n) - 1)
    from math import comb

    if comb(n, r) > guard_bases:
        raise GuardExceeded(f"C({n},{r}) basis candidates exceed guard")
    bases = tuple(m for m in subsets_of_size(n, r) if rank_of(m) == r)
    if not bases:
        raise ConstructionInconsistency("presentation produced no bases")
    out = Matroid(n, r, bases)
    if cross_check:
        rep = out.derived_sets()
        got = {f: out.subset_rank(f) for f in rep.cyclic_flats}
        want = dict(rho)
        if got != want:
            raise ConstructionInconsistency(
                "re-derived cyclic flats disagree with the presentation"
            )
    return out
