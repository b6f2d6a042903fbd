"""Matroids over ground sets {0, ..., n-1} with bases stored as bit-masks.

Conventions:
- A subset of the ground set is an int mask (bit i = element i).
- The basis family is a duplicate-free tuple of masks sorted numerically,
  which is the colexicographic order on subsets.
- Matroids are immutable after construction; every operation returns a
  new object.  Minor operations (restrict / delete / contract) re-index
  the surviving elements to 0..m-1 in ascending order of the old indices.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bitset import (
    canonical_family,
    complement,
    elements_of,
    full_mask,
    iter_bits,
    mask_of,
    size,
    subsets_of_size,
)
from .errors import (
    CardinalityMismatch,
    EmptyFamily,
    ExchangeAxiomViolation,
    GuardExceeded,
    InvariantViolation,
    OutOfRange,
    RankDeficient,
)

MAX_GROUND = 64
CONNECTIVITY_GUARD = 20
BRUTE_ISO_GUARD = 9


class Matroid:
    """A matroid given by its ground-set size, rank and basis family."""

    def __init__(
        self,
        n: int,
        rank: int,
        bases: Tuple[int, ...],
        labels: Optional[Tuple[str, ...]] = None,
    ):
        self.n = n
        self.rank = rank
        self.bases = bases
        self.labels = labels
        self._cache: Dict[object, object] = {}

    # -- identity ---------------------------------------------------------

    @property
    def key(self) -> Tuple[int, int, Tuple[int, ...]]:
        return (self.n, self.rank, self.bases)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Matroid) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        shown = [elements_of(b) for b in self.bases[:4]]
        more = "..." if len(self.bases) > 4 else ""
        return f"Matroid(n={self.n}, rank={self.rank}, bases={shown}{more})"

    def label_of(self, e: int) -> str:
        return self.labels[e] if self.labels else str(e)

    # -- basic queries ----------------------------------------------------

    def ground_mask(self) -> int:
        return full_mask(self.n)

    def _require_subset(self, a_mask: int) -> None:
        if a_mask & ~self.ground_mask():
            raise OutOfRange(f"subset {a_mask:#x} exceeds ground set of size {self.n}")

    def subset_rank(self, a_mask: int) -> int:
        """Rank of a subset: the largest intersection with a basis."""
        self._require_subset(a_mask)
        cap = min(size(a_mask), self.rank)
        best = 0
        for b in self.bases:
            c = size(a_mask & b)
            if c > best:
                best = c
                if best == cap:
                    break
        return best

    def is_independent(self, a_mask: int) -> bool:
        return self.subset_rank(a_mask) == size(a_mask)

    def closure(self, a_mask: int) -> int:
        """All elements whose addition does not raise the rank."""
        self._require_subset(a_mask)
        rk = self.subset_rank(a_mask)
        out = a_mask
        for e in range(self.n):
            bit = 1 << e
            if not a_mask & bit and self.subset_rank(a_mask | bit) == rk:
                out |= bit
        return out

    def loops(self) -> int:
        """Mask of elements lying in no basis."""
        u = 0
        for b in self.bases:
            u |= b
        return complement(u, self.n)

    def coloops(self) -> int:
        """Mask of elements lying in every basis."""
        u = self.ground_mask()
        for b in self.bases:
            u &= b
        return u

    def nonbases(self) -> Tuple[int, ...]:
        bset = set(self.bases)
        return tuple(
            m for m in subsets_of_size(self.n, self.rank) if m not in bset
        )

    def independent_sets(self) -> Tuple[int, ...]:
        """All independent sets (subsets of bases), canonical order."""
        out = set()
        stack = list(self.bases)
        while stack:
            m = stack.pop()
            if m in out:
                continue
            out.add(m)
            for e in iter_bits(m):
                stack.append(m ^ (1 << e))
        return tuple(sorted(out))

    # -- constructions on matroids ----------------------------------------

    def relabel(self, perm: Sequence[int]) -> "Matroid":
        """Apply a ground-set permutation: element e becomes perm[e]."""
        if sorted(perm) != list(range(self.n)):
            raise OutOfRange("not a permutation of the ground set")
        new_bases = []
        for b in self.bases:
            m = 0
            for e in iter_bits(b):
                m |= 1 << perm[e]
            new_bases.append(m)
        new_labels = None
        if self.labels:
            lab = [""] * self.n
            for e in range(self.n):
                lab[perm[e]] = self.labels[e]
            new_labels = tuple(lab)
        return Matroid(self.n, self.rank, canonical_family(new_bases), new_labels)

    def dual(self) -> "Matroid":
        full = self.ground_mask()
        bases = canonical_family(full ^ b for b in self.bases)
        return Matroid(self.n, self.n - self.rank, bases, self.labels)

    def restrict(self, a_mask: int) -> "Matroid":
        """The matroid on `a_mask`, re-indexed to 0..|A|-1."""
        self._require_subset(a_mask)
        keep = elements_of(a_mask)
        pos = {e: i for i, e in enumerate(keep)}
        sub_rank = self.subset_rank(a_mask)
        new_bases = set()
        for b in self.bases:
            inner = b & a_mask
            if size(inner) == sub_rank:
                new_bases.add(mask_of(pos[e] for e in iter_bits(inner)))
        if sub_rank < self.rank:
            # maximal independents inside A need not sit inside a single
            # basis trace, so enumerate directly
            for cand in subsets_of_size(len(keep), sub_rank):
                orig = mask_of(keep[i] for i in iter_bits(cand))
                if self.is_independent(orig):
                    new_bases.add(cand)
        labels = tuple(self.label_of(e) for e in keep) if self.labels else None
        return Matroid(len(keep), sub_rank, canonical_family(new_bases), labels)

    def delete(self, a_mask: int) -> "Matroid":
        self._require_subset(a_mask)
        return self.restrict(self.ground_mask() ^ a_mask)

    def contract(self, a_mask: int) -> "Matroid":
        self._require_subset(a_mask)
        return self.dual().delete(a_mask).dual()

    def direct_sum(self, other: "Matroid") -> "Matroid":
        shift = self.n
        bases = canonical_family(
            a | (b << shift) for a in self.bases for b in other.bases
        )
        labels = None
        if self.labels and other.labels:
            labels = self.labels + other.labels
        return Matroid(self.n + other.n, self.rank + other.rank, bases, labels)

    def free_extension(self) -> "Matroid":
        """Add a new element (index n) in general position."""
        if self.n + 1 > MAX_GROUND:
            raise GuardExceeded("ground set would exceed 64 elements")
        new_bit = 1 << self.n
        fam = set(self.bases)
        for b in self.bases:
            for e in iter_bits(b):
                fam.add((b ^ (1 << e)) | new_bit)
        labels = self.labels + (str(self.n),) if self.labels else None
        return Matroid(self.n + 1, self.rank, canonical_family(fam), labels)

    # -- predicates ---------------------------------------------------------

    def is_simple(self) -> bool:
        """No loops, and every 2-element subset independent."""
        if self.loops():
            return False
        for a in range(self.n):
            for b in range(a + 1, self.n):
                if self.subset_rank((1 << a) | (1 << b)) != 2:
                    return False
        return True

    def is_paving(self) -> bool:
        """Every circuit has size >= rank, i.e. all (rank-1)-subsets independent."""
        if self.rank <= 1:
            return True
        for m in subsets_of_size(self.n, self.rank - 1):
            if not self.is_independent(m):
                return False
        return True

    def is_sparse_paving(self) -> bool:
        """Both the matroid and its dual are paving.

        For rank-3 inputs this is additionally cross-checked against the
        equivalent criterion "simple with all cyclic hyperplanes of size 3".
        """
        by_def = self.is_paving() and self.dual().is_paving()
        if self.rank == 3:
            by_char = self.is_simple() and all(
                size(h) == 3 for h in self.cyclic_hyperplanes()
            )
            if by_char != by_def:
                raise InvariantViolation(
                    "sparse-paving definition and rank-3 criterion disagree"
                )
        return by_def

    def cyclic_hyperplanes(self) -> Tuple[int, ...]:
        from .derived import derive_sets

        rep = derive_sets(self)
        hset = set(rep.hyperplanes)
        return tuple(f for f in rep.cyclic_flats if f in hset)

    def girth(self) -> Optional[int]:
        """Size of the smallest dependent set, or None when independent throughout."""
        for k in range(1, min(self.rank + 1, self.n) + 1):
            for m in subsets_of_size(self.n, k):
                if not self.is_independent(m):
                    return k
        return None

    def connectivity(self, guard_n: int = CONNECTIVITY_GUARD) -> Optional[int]:
        """Smallest k admitting a k-separation, or None if none exists.

        A bipartition (A, E\\A) witnesses k = rk(A) + rk(E\\A) - rk(M) + 1
        provided both sides have at least k elements.  Scans all
        bipartitions through the full rank table.
        """
        if self.n > guard_n:
            raise GuardExceeded(
                f"connectivity scan needs 2^{self.n} ranks (guard {guard_n})"
            )
        if self.n < 2:
            return None
        import numpy as np

        from .derived import popcount_table, rank_table

        rk = rank_table(self).astype(np.int16)
        pc = popcount_table(self.n).astype(np.int16)
        fullm = self.ground_mask()
        rk_comp = rk[np.arange(fullm + 1) ^ fullm]
        lam1 = rk + rk_comp - self.rank + 1
        min_side = np.minimum(pc, self.n - pc)
        ok = (pc > 0) & (pc < self.n) & (lam1 <= min_side)
        if not ok.any():
            return None
        return int(lam1[ok].min())

    def predicates(self) -> Dict[str, object]:
        g = self.girth()
        return {
            "is_simple": self.is_simple(),
            "is_paving": self.is_paving(),
            "is_sparse_paving": self.is_sparse_paving(),
            "girth": g,
            "connectivity": self.connectivity(),
        }

    # -- heavyweight derived data (delegates) -------------------------------

    def derived_sets(self, guard_n: int = 24):
        from .derived import derive_sets

        return derive_sets(self, guard_n=guard_n)

    def tutte_polynomial(self, guard_n: int = 24):
        from .derived import tutte_polynomial

        return tutte_polynomial(self, guard_n=guard_n)

    def characteristic_polynomial(self, guard_n: int = 24) -> Tuple[int, ...]:
        from .derived import characteristic_polynomial

        return characteristic_polynomial(self, guard_n=guard_n)

    def validate(self) -> None:
        """Re-check every structural invariant; raises on failure."""
        fam = self.bases
        if not fam:
            raise EmptyFamily("basis family is empty")
        if fam != canonical_family(fam):
            raise InvariantViolation("basis family not in canonical order")
        for b in fam:
            if b & ~self.ground_mask():
                raise OutOfRange(f"basis {b:#x} exceeds ground set")
            if size(b) != self.rank:
                raise CardinalityMismatch(
                    f"basis {b:#x} has size {size(b)}, expected {self.rank}"
                )
        check_exchange_axiom(fam)


def check_exchange_axiom(bases: Sequence[int]) -> None:
    """Raise ExchangeAxiomViolation with a witness on the first failure."""
    fam = list(bases)
    bset = set(fam)
    for a_mask in fam:
        for b_mask in fam:
            if a_mask == b_mask:
                continue
            movable = a_mask & ~b_mask
            incoming_bits = []
            inc = b_mask & ~a_mask
            while inc:
                low = inc & -inc
                incoming_bits.append(low)
                inc ^= low
            while movable:
                low = movable & -movable
                movable ^= low
                stripped = a_mask ^ low
                for ib in incoming_bits:
                    if stripped | ib in bset:
                        break
                else:
                    raise ExchangeAxiomViolation(
                        a_mask, b_mask, low.bit_length() - 1
                    )


# -- constructors -----------------------------------------------------------


def matroid_from_bases(
    n: int,
    bases: Iterable[Iterable[int] | int],
    labels: Optional[Sequence[str]] = None,
) -> Matroid:
    """Validate a basis family and build the matroid."""
    if n > MAX_GROUND:
        raise GuardExceeded(f"ground sets are limited to {MAX_GROUND} elements")
    fam = canonical_family(_as_mask(b) for b in bases)
    if not fam:
        raise EmptyFamily("basis family is empty")
    for b in fam:
        if b & ~full_mask(n):
            raise OutOfRange(f"basis {b:#x} exceeds ground set of size {n}")
    rank = size(fam[0])
    for b in fam:
        if size(b) != rank:
            raise CardinalityMismatch(
                f"bases of sizes {rank} and {size(b)} in one family"
            )
    check_exchange_axiom(fam)
    if labels is not None and len(labels) != n:
        raise CardinalityMismatch("labels must match the ground-set size")
    return Matroid(n, rank, fam, tuple(labels) if labels else None)


def matroid_from_nonbases(
    n: int,
    r: int,
    nonbases: Iterable[Iterable[int] | int],
    labels: Optional[Sequence[str]] = None,
) -> Matroid:
    """Build a matroid from the r-subsets that are NOT bases."""
    nb = set()
    for m in nonbases:
        mm = _as_mask(m)
        if mm & ~full_mask(n):
            raise OutOfRange(f"nonbasis {mm:#x} exceeds ground set of size {n}")
        if size(mm) != r:
            raise CardinalityMismatch(f"nonbasis {mm:#x} does not have size {r}")
        nb.add(mm)
    bases = [m for m in subsets_of_size(n, r) if m not in nb]
    return matroid_from_bases(n, bases, labels)


def matroid_from_vectors(matrix: Sequence[Sequence]) -> Matroid:
    """Matroid of a labeled vector configuration (columns of `matrix`).

    Entries may be ints or Fractions; all arithmetic is exact.
    """
    rows = [[Fraction(x) for x in row] for row in matrix]
    r = len(rows)
    n = len(rows[0]) if rows else 0
    for row in rows:
        if len(row) != n:
            raise CardinalityMismatch("ragged matrix")
    if _rational_rank([row[:] for row in rows]) != r:
        raise RankDeficient(f"matrix rank below {r}")
    bases = []
    for cols in combinations(range(n), r):
        sub = [[rows[i][j] for j in cols] for i in range(r)]
        if _rational_rank(sub) == r:
            bases.append(mask_of(cols))
    return matroid_from_bases(n, bases)


def _rational_rank(mat: List[List[Fraction]]) -> int:
    m = len(mat)
    if m == 0:
        return 0
    n = len(mat[0])
    rank = 0
    row = 0
    for col in range(n):
        pivot = next((i for i in range(row, m) if mat[i][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        pv = mat[row][col]
        for i in range(row + 1, m):
            if mat[i][col] != 0:
                f = mat[i][col] / pv
                for j in range(col, n):
                    mat[i][j] -= f * mat[row][j]
        row += 1
        rank += 1
        if row == m:
            break
    return rank


def matroid_from_graph(edges: Sequence[Tuple[object, object]]) -> Matroid:
    """Cycle matroid of a multigraph given as a list of vertex pairs.

    Edges are the ground elements, in input order.  Self-loop edges become
    matroid loops.  Bases are the edge sets of spanning forests.
    """
    n = len(edges)
    if n > MAX_GROUND:
        raise GuardExceeded(f"ground sets are limited to {MAX_GROUND} elements")
    verts: List[object] = []
    vidx: Dict[object, int] = {}
    for u, v in edges:
        for w in (u, v):
            if w not in vidx:
                vidx[w] = len(verts)
                verts.append(w)
    parent = list(range(len(verts)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = len(verts)
    for u, v in edges:
        ru, rv = find(vidx[u]), find(vidx[v])
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    rank = len(verts) - comps
    bases = []
    for m in subsets_of_size(n, rank):
        if _is_forest(m, edges, vidx, len(verts)):
            bases.append(m)
    return matroid_from_bases(n, bases)


def _is_forest(edge_mask: int, edges, vidx, nv: int) -> bool:
    parent = list(range(nv))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in iter_bits(edge_mask):
        u, v = edges[e]
        ru, rv = find(vidx[u]), find(vidx[v])
        if ru == rv:
            return False
        parent[ru] = rv
    return True


def uniform_matroid(r: int, n: int) -> Matroid:
    """U(r, n): every r-subset is a basis."""
    return matroid_from_bases(n, subsets_of_size(n, r))


def _as_mask(subset: Iterable[int] | int) -> int:
    if isinstance(subset, int):
        return subset
    return mask_of(subset)


# -- brute-force isomorphism (oracle) ----------------------------------------


def brute_force_isomorphic(
    m1: Matroid, m2: Matroid, guard_n: int = BRUTE_ISO_GUARD
) -> Optional[Tuple[int, ...]]:
    """Search all ground bijections for one preserving the basis family.

    Oracle-scale only (guarded); prunes on per-element basis counts and on
    partial-map consistency.  Returns the image tuple or None.
    """
    if m1.n > guard_n or m2.n > guard_n:
        raise GuardExceeded(f"brute-force isomorphism is guarded at n <= {guard_n}")
    if m1.n != m2.n or m1.rank != m2.rank or len(m1.bases) != len(m2.bases):
        return None
    n = m1.n

    def signature(m: Matroid) -> List[int]:
        cnt = [0] * m.n
        for b in m.bases:
            for e in iter_bits(b):
                cnt[e] += 1
        return cnt

    sig1, sig2 = signature(m1), signature(m2)
    if sorted(sig1) != sorted(sig2):
        return None
    if m1.rank == 0:
        return tuple(range(n))
    b2 = set(m2.bases)
    image = [-1] * n
    used = [False] * n

    def consistent(k: int) -> bool:
        # every basis-sized subset of the mapped prefix that includes k
        # must map basis <-> basis
        if k + 1 < m1.rank:
            return True
        for rest in combinations(range(k), m1.rank - 1):
            src = mask_of(rest) | (1 << k)
            dst = mask_of(image[e] for e in rest) | (1 << image[k])
            if (src in _bset1) != (dst in b2):
                return False
        return True

    _bset1 = set(m1.bases)

    def backtrack(k: int) -> bool:
        if k == n:
            return True
        for w in range(n):
            if used[w] or sig1[k] != sig2[w]:
                continue
            image[k] = w
            used[w] = True
            if consistent(k) and backtrack(k + 1):
                return True
            used[w] = False
        image[k] = -1
        return False

    if backtrack(0):
        return tuple(image)
    return None


def brute_force_automorphism_count(m: Matroid, guard_n: int = BRUTE_ISO_GUARD) -> int:
    """Count all basis-preserving ground permutations (oracle-scale)."""
    if m.n > guard_n:
        raise GuardExceeded(f"guarded at n <= {guard_n}")
    bset = set(m.bases)
    count = 0
    for perm in permutations(range(m.n)):
        ok = True
        for b in m.bases:
            if mask_of(perm[e] for e in iter_bits(b)) not in bset:
                ok = False
                break
        if ok:
            count += 1
    return count
