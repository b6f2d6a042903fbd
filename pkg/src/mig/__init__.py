"""Matroid isomorphism games.

Matroid construction and invariants, pointed-set games scored by a
four-valued relation, relation colored graph search, constraint-system
derived matroid pairs, finite-dimensional quantum strategy verification,
and necessary-condition screeners with noncommutativity certificates.
"""

from .matroid import (
    Matroid,
    brute_force_isomorphic,
    matroid_from_bases,
    matroid_from_graph,
    matroid_from_nonbases,
    matroid_from_vectors,
    uniform_matroid,
)

__version__ = "0.1.0"

__all__ = [
    "Matroid",
    "brute_force_isomorphic",
    "matroid_from_bases",
    "matroid_from_graph",
    "matroid_from_nonbases",
    "matroid_from_vectors",
    "uniform_matroid",
    "__version__",
]
