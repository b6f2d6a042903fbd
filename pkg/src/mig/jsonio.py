"""JSON forms for matroids, polynomials, and reports.

Matroid files carry either the basis family or the nonbasis family
(whichever the writer chose); both are accepted on input.  All families
are emitted in canonical order: members as ascending element lists,
families sorted colexicographically.  Fixed key order plus fixed family
order makes every emission byte-reproducible.
"""

from __future__ import annotations

import json
from typing import Dict, Optional

from .bitset import elements_of
from .derived import SubsetReport, TuttePolynomial
from .errors import MigError
from .matroid import Matroid, matroid_from_bases, matroid_from_nonbases


def matroid_to_json(m: Matroid, prefer_nonbases: Optional[bool] = None) -> Dict:
    """Encode a matroid; the sparser of bases/nonbases is used by default."""
    nb = m.nonbases()
    use_nb = prefer_nonbases
    if use_nb is None:
        use_nb = len(nb) < len(m.bases)
    out: Dict[str, object] = {"n": m.n, "rank": m.rank}
    if use_nb:
        out["nonbases"] = [elements_of(x) for x in nb]
    else:
        out["bases"] = [elements_of(x) for x in m.bases]
    if m.labels:
        out["labels"] = list(m.labels)
    return out


def matroid_from_json(data: Dict) -> Matroid:
    labels = data.get("labels")
    if "bases" in data:
        m = matroid_from_bases(int(data["n"]), data["bases"], labels)
        if "rank" in data and int(data["rank"]) != m.rank:
            raise MigError(
                f"declared rank {data['rank']} does not match the bases ({m.rank})"
            )
        return m
    if "nonbases" in data:
        return matroid_from_nonbases(
            int(data["n"]), int(data["rank"]), data["nonbases"], labels
        )
    raise MigError("matroid JSON needs a 'bases' or 'nonbases' field")


def load_matroid(path: str) -> Matroid:
    with open(path, "r", encoding="utf-8") as fp:
        return matroid_from_json(json.load(fp))


def tutte_to_json(t: TuttePolynomial) -> Dict:
    return {
        "terms": [
            {"x": i, "y": j, "c": c} for (i, j), c in t.terms_sorted()
        ]
    }


def subset_report_to_json(rep: SubsetReport) -> Dict:
    return {
        "independents": [elements_of(x) for x in rep.independents],
        "circuits": [elements_of(x) for x in rep.circuits],
        "flats": [elements_of(x) for x in rep.flats],
        "hyperplanes": [elements_of(x) for x in rep.hyperplanes],
        "cyclicFlats": [elements_of(x) for x in rep.cyclic_flats],
        "loops": elements_of(rep.loops),
        "coloops": elements_of(rep.coloops),
        "girth": rep.girth if rep.girth is not None else "infinite",
    }


def dumps(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
