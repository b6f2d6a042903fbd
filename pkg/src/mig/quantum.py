"""Finite-dimensional verification of perfect quantum strategies.

The constraint-system side uses the standard 3x3 grid of two-qubit Pauli
observables (row products +I, column products +I, +I, -I).  Measuring a
line's joint eigenprojections answers that constraint; shared variables
sit on shared observables, which makes cross-line projection products
vanish at the operator level whenever assignments disagree.

Conventions fixed here: Bob's measurement operators are the entrywise
complex conjugates of Alice's, and the shared state is the maximally
entangled unit vector on C^4 (x) C^4, so every pair probability reduces
to Tr(A B) / 4 for Hermitian A, B.  The synchronous verification uses
the same normalized trace, which keeps the two routes numerically
identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations, product
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .bitset import elements_of, iter_bits
from .errors import (
    ConstructionInconsistency,
    DimensionMismatch,
    InvariantViolation,
    NonCommuting,
)
from .game import LBCS
from .matroid import Matroid
from .structures import IsoStructure, PointedSet, pointed_sets, rel

TOL = 1e-9

I2 = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.kron(a, b)


@dataclass
class ObservableGrid:
    """3x3 Hermitian involutions with prescribed row/column sign targets."""

    cells: List[List[np.ndarray]]
    row_signs: Tuple[int, int, int]
    col_signs: Tuple[int, int, int]

    @property
    def dim(self) -> int:
        return self.cells[0][0].shape[0]

    def line(self, idx: int) -> Tuple[List[np.ndarray], int]:
        """Observables and target sign of line idx (0-2 rows, 3-5 columns)."""
        if idx < 3:
            return list(self.cells[idx]), self.row_signs[idx]
        j = idx - 3
        return [self.cells[i][j] for i in range(3)], self.col_signs[j]

    def validate(self, tol: float = TOL) -> None:
        d = self.dim
        eye = np.eye(d)
        for i in range(3):
            for j in range(3):
                o = self.cells[i][j]
                if o.shape != (d, d):
                    raise InvariantViolation("ragged observable grid")
                if np.abs(o - o.conj().T).max() > tol:
                    raise InvariantViolation(f"cell ({i},{j}) is not Hermitian")
                if np.abs(o @ o - eye).max() > tol:
                    raise InvariantViolation(f"cell ({i},{j}) does not square to 1")
        for idx in range(6):
            obs, sign = self.line(idx)
            for a in range(3):
                for b in range(a + 1, 3):
                    if np.abs(obs[a] @ obs[b] - obs[b] @ obs[a]).max() > tol:
                        raise InvariantViolation(f"line {idx} does not commute")
            prod = obs[0] @ obs[1] @ obs[2]
            if np.abs(prod - sign * eye).max() > tol:
                raise InvariantViolation(f"line {idx} misses its sign target")


def magic_square_observables() -> ObservableGrid:
    """The standard two-qubit Pauli grid; all checks run at construction."""
    z, x, y = PAULI_Z, PAULI_X, PAULI_Y
    grid = ObservableGrid(
        cells=[
            [_kron(z, I2), _kron(I2, z), _kron(z, z)],
            [_kron(I2, x), _kron(x, I2), _kron(x, x)],
            [_kron(z, x), _kron(x, z), _kron(y, y)],
        ],
        row_signs=(1, 1, 1),
        col_signs=(1, 1, -1),
    )
    grid.validate()
    return grid


def joint_projections(
    grid: ObservableGrid, line_idx: int, tol: float = TOL
) -> List[Tuple[Tuple[int, int, int], np.ndarray]]:
    """The four joint eigenprojections of one line, by fulfilling assignment.

    Assignments multiply to the line's sign; each projection is the
    product of the three spectral factors (1 + k_i O_i) / 2.
    """
    obs, sign = grid.line(line_idx)
    eye = np.eye(grid.dim)
    for a in range(3):
        for b in range(a + 1, 3):
            if np.abs(obs[a] @ obs[b] - obs[b] @ obs[a]).max() > tol:
                raise NonCommuting(f"line {line_idx} observables do not commute")
    out = []
    for k in product((1, -1), repeat=3):
        if k[0] * k[1] * k[2] != sign:
            continue
        proj = eye
        for kv, o in zip(k, obs):
            proj = proj @ (eye + kv * o) / 2
        out.append((k, proj))
    return out


# -- matching a constraint system onto the grid --------------------------------


@dataclass(frozen=True)
class GridMatching:
    """How an LBCS maps onto the grid: constraint -> line, variable -> cell."""

    line_of_constraint: Tuple[int, ...]
    cell_of_variable: Tuple[Tuple[int, int], ...]
    signs_consistent: bool


def _magic_square_classes(lbcs: LBCS) -> Tuple[List[int], List[int]]:
    """Split the six constraints into two parallel classes of three."""
    cs = lbcs.constraints
    if lbcs.num_vars != 9 or len(cs) != 6:
        raise DimensionMismatch("need 9 variables and 6 constraints")
    if any(len(c.variables) != 3 for c in cs):
        raise DimensionMismatch("every constraint must have 3 variables")
    sets = [frozenset(c.variables) for c in cs]
    first_class = [0] + [i for i in range(1, 6) if not sets[i] & sets[0]]
    second_class = [i for i in range(6) if i not in first_class]
    if len(first_class) != 3 or len(second_class) != 3:
        raise DimensionMismatch("constraints do not form two parallel classes")
    for cls in (first_class, second_class):
        union = set()
        for i in cls:
            union |= sets[i]
        if len(union) != 9:
            raise DimensionMismatch("a parallel class must cover all variables")
    for i in first_class:
        for j in second_class:
            if len(sets[i] & sets[j]) != 1:
                raise DimensionMismatch("crossing constraints must share one variable")
    return first_class, second_class


def match_lbcs_to_grid(lbcs: LBCS, grid: ObservableGrid) -> GridMatching:
    """Deterministic structural matching, preferring sign-consistent ones."""
    class_a, class_b = _magic_square_classes(lbcs)
    sets = [frozenset(c.variables) for c in lbcs.constraints]
    line_signs = [grid.line(i)[1] for i in range(6)]
    best: Optional[GridMatching] = None
    for rows, cols in ((class_a, class_b), (class_b, class_a)):
        for row_perm in permutations(range(3)):
            for col_perm in permutations(range(3)):
                line_of: List[int] = [0] * 6
                for ci, r in zip(rows, row_perm):
                    line_of[ci] = r
                for ci, c in zip(cols, col_perm):
                    line_of[ci] = 3 + c
                cell_of: List[Tuple[int, int]] = [(-1, -1)] * 9
                for ci_row in rows:
                    for ci_col in cols:
                        (v,) = sets[ci_row] & sets[ci_col]
                        cell_of[v] = (line_of[ci_row], line_of[ci_col] - 3)
                ok = all(
                    lbcs.constraints[ci].sign == line_signs[line_of[ci]]
                    for ci in range(6)
                )
                cand = GridMatching(tuple(line_of), tuple(cell_of), ok)
                if ok:
                    return cand
                if best is None:
                    best = cand
    assert best is not None
    return best


def _constraint_projections(
    lbcs: LBCS, grid: ObservableGrid, matching: GridMatching
) -> List[Dict[Tuple[int, ...], np.ndarray]]:
    """Per constraint: fulfilling assignment (over its sorted variables) -> projection."""
    out: List[Dict[Tuple[int, ...], np.ndarray]] = []
    eye = np.eye(grid.dim)
    for ci, c in enumerate(lbcs.constraints):
        table: Dict[Tuple[int, ...], np.ndarray] = {}
        obs = []
        for v in c.variables:
            i, j = matching.cell_of_variable[v]
            obs.append(grid.cells[i][j])
        for k in product((1, -1), repeat=3):
            if k[0] * k[1] * k[2] != c.sign:
                continue
            proj = eye
            for kv, o in zip(k, obs):
                proj = proj @ (eye + kv * o) / 2
            table[k] = proj
        out.append(table)
    return out


def verify_lbcs_quantum_strategy(
    lbcs: LBCS, grid: ObservableGrid, tol: float = TOL
) -> Dict[str, object]:
    """Score the grid strategy on every ordered constraint pair.

    The winning probability of a pair is the sum of Tr(P_A P_B) / dim
    over consistent pairs of fulfilling assignments; perfect means every
    pair reaches 1 - tol.
    """
    matching = match_lbcs_to_grid(lbcs, grid)
    tables = _constraint_projections(lbcs, grid, matching)
    cs = lbcs.constraints
    dim = grid.dim
    min_prob = 1.0
    for ia, ca in enumerate(cs):
        for ib, cb in enumerate(cs):
            shared = set(ca.variables) & set(cb.variables)
            prob = 0.0
            for ka, pa in tables[ia].items():
                va = dict(zip(ca.variables, ka))
                for kb, pb in tables[ib].items():
                    vb = dict(zip(cb.variables, kb))
                    if any(va[s] != vb[s] for s in shared):
                        continue
                    prob += float(np.trace(pa @ pb).real) / dim
            min_prob = min(min_prob, prob)
    return {
        "perfect": min_prob >= 1 - tol,
        "minPairProb": min_prob,
        "signsConsistent": matching.signs_consistent,
    }


# -- synchronous strategies for the isomorphism game ---------------------------


@dataclass
class SyncStrategyPVM:
    """Projection family over (question, answer) pairs plus vertex metadata.

    projections[i, j] is the operator for question i (pointed sets of the
    first matroid) and answer j (pointed sets of the second); the trace
    state is the normalized matrix trace.
    """

    dim: int
    projections: np.ndarray  # shape (q, a, dim, dim)
    questions: Tuple[PointedSet, ...]
    answers: Tuple[PointedSet, ...]


def _decode_lifted_set(mask: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """Split a doubled-ground subset into base variables and their signs."""
    pairs = sorted((e // 2, 1 if e % 2 == 0 else -1) for e in elements_of(mask))
    return tuple(v for v, _ in pairs), tuple(s for _, s in pairs)


def _decode_lifted_pointed(
    ps: PointedSet,
) -> Tuple[Tuple[int, ...], Tuple[int, ...], int, int]:
    """Split a doubled-ground pointed set into (variables, signs, var, sign)."""
    variables, signs = _decode_lifted_set(ps.members)
    return variables, signs, ps.point // 2, 1 if ps.point % 2 == 0 else -1


def iso_game_pvms(
    p: Matroid, q: Matroid, grid: ObservableGrid
) -> SyncStrategyPVM:
    """The projection family induced by the grid strategy on the (P,Q) game.

    Question (H, t) pointed at (x, a) gets the joint projection of line H
    at assignment t * t' exactly when the answer lifts the same
    constraint H pointed at the same variable x; all other entries are 0.
    """
    from .lbcs_construct import SignAssignment, grid_matroid, lbcs_from_matroid

    base = grid_matroid()
    hyper = base.cyclic_hyperplanes()

    def side_signs(mat: Matroid) -> SignAssignment:
        sgn = {}
        for h in hyper:
            vs = tuple(elements_of(h))
            prods = set()
            for nb in mat.nonbases():
                variables, signs = _decode_lifted_set(nb)
                if variables == vs:
                    prod = 1
                    for s in signs:
                        prod *= s
                    prods.add(prod)
            if len(prods) != 1:
                raise ConstructionInconsistency(f"mixed sign products over {vs}")
            sgn[h] = prods.pop()
        return SignAssignment(sgn)

    q_lbcs = lbcs_from_matroid(base, side_signs(q))
    p_lbcs = lbcs_from_matroid(base, side_signs(p))
    for c in p_lbcs.constraints:
        if c.sign != 1:
            raise ConstructionInconsistency("first matroid must lift the homogeneous system")
    matching = match_lbcs_to_grid(q_lbcs, grid)
    if not matching.signs_consistent:
        raise ConstructionInconsistency("grid cannot realize the signed system")
    tables = _constraint_projections(q_lbcs, grid, matching)
    var_index = {c.variables: i for i, c in enumerate(q_lbcs.constraints)}

    qs = pointed_sets(p, IsoStructure.NONBASES)
    ans = pointed_sets(q, IsoStructure.NONBASES)
    dim = grid.dim
    fam = np.zeros((len(qs), len(ans), dim, dim), dtype=complex)
    for qi, ps_q in enumerate(qs):
        variables, t, x, a = _decode_lifted_pointed(ps_q)
        if variables not in var_index:
            raise ConstructionInconsistency(
                "question does not lift a constraint of the base system"
            )
        ci = var_index[variables]
        for ai, ps_a in enumerate(ans):
            variables2, t2, y, b = _decode_lifted_pointed(ps_a)
            if variables2 != variables or y != x:
                continue
            k = tuple(u * v for u, v in zip(t, t2))
            fam[qi, ai] = tables[ci][k]
    return SyncStrategyPVM(dim, fam, qs, ans)


def sync_strategy_from_ground_iso(
    m: Matroid, n: Matroid, kind: IsoStructure, ground_map: Sequence[int]
) -> SyncStrategyPVM:
    """Rank-one (dimension 1) strategy of a genuine ground isomorphism."""
    qs = pointed_sets(m, kind)
    ans = pointed_sets(n, kind)
    index = {ps: i for i, ps in enumerate(ans)}
    fam = np.zeros((len(qs), len(ans), 1, 1), dtype=complex)
    for qi, ps in enumerate(qs):
        members = 0
        for e in iter_bits(ps.members):
            members |= 1 << ground_map[e]
        target = PointedSet(members, ground_map[ps.point])
        fam[qi, index[target], 0, 0] = 1.0
    return SyncStrategyPVM(1, fam, qs, ans)


def verify_sync_conditions(
    strategy: SyncStrategyPVM,
    m: Matroid,
    n: Matroid,
    kind: IsoStructure = IsoStructure.NONBASES,
    tol: float = TOL,
) -> Dict[str, object]:
    """Check the three perfect-strategy conditions under the normalized trace.

    (1) answer sums are the identity per question, (2) question sums are
    the identity per answer, (3) mismatched rel pairs have vanishing
    operator products.  Reports the largest defect of each.
    """
    fam = strategy.projections
    nq, na, dim, _ = fam.shape
    qs = pointed_sets(m, kind)
    ans = pointed_sets(n, kind)
    if (len(qs), len(ans)) != (nq, na) or qs != strategy.questions:
        raise DimensionMismatch("strategy shape does not match the game alphabets")
    eye = np.eye(dim)
    row_defect = float(np.abs(fam.sum(axis=1) - eye).max()) if nq else 0.0
    col_defect = float(np.abs(fam.sum(axis=0) - eye).max()) if na else 0.0

    norms = np.abs(fam).max(axis=(2, 3))
    live = np.argwhere(norms > tol)
    rel_q = np.array([[rel(a, b) for b in qs] for a in qs], dtype=np.int8)
    rel_a = np.array([[rel(x, y) for y in ans] for x in ans], dtype=np.int8)
    mismatch_defect = 0.0
    if len(live):
        lhs = fam[live[:, 0], live[:, 1]]
        for qj in range(nq):
            rq = rel_q[live[:, 0], qj]
            for aj in range(na):
                if norms[qj, aj] <= tol:
                    continue
                bad = rq != rel_a[live[:, 1], aj]
                if not bad.any():
                    continue
                prods = np.einsum("nij,jk->nik", lhs[bad], fam[qj, aj])
                mismatch_defect = max(mismatch_defect, float(np.abs(prods).max()))
    perfect = max(row_defect, col_defect, mismatch_defect) < tol
    return {
        "conditions": {
            "rowSums": row_defect,
            "colSums": col_defect,
            "relOrthogonality": mismatch_defect,
        },
        "perfect": perfect,
        "tolerance": tol,
    }


def pair_probabilities(strategy: SyncStrategyPVM, qi: int, qj: int) -> np.ndarray:
    """p(x, y | qi, qj) = Tr(F[qi,x] F[qj,y]) / dim over all answer pairs."""
    fam = strategy.projections
    vals = np.einsum("xij,yji->xy", fam[qi], fam[qj]) / strategy.dim
    return vals
