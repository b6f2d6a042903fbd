"""Command-line interface.

Every command reads/writes the package's JSON formats and is fully
deterministic: the same inputs always produce byte-identical output.
Exit codes separate mathematical verdicts from operational failures:
0 = success or affirmative answer, 1 = negative verdict (no isomorphism,
no solutions, screen failure, no certificate), 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import List, Optional

from .bitset import elements_of, mask_of
from .errors import MigError
from .jsonio import (
    dumps,
    load_matroid,
    matroid_to_json,
    subset_report_to_json,
    tutte_to_json,
)
from .structures import IsoStructure, covers

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_ERROR = 2


def _parse_elements(text: str) -> List[int]:
    return [int(x) for x in text.split(",") if x != ""]


def _emit(payload: object, out: Optional[str]) -> None:
    text = dumps(payload) if not isinstance(payload, str) else payload
    if out:
        with open(out, "w", encoding="utf-8") as fp:
            fp.write(text)
    else:
        sys.stdout.write(text)


def _structure(args) -> IsoStructure:
    return IsoStructure.parse(args.structure)


# -- subcommand handlers -------------------------------------------------------


def cmd_matroid(args) -> int:
    m = load_matroid(args.file)
    if args.action == "info":
        payload = {
            "matroid": matroid_to_json(m),
            "predicates": _jsonable_predicates(m),
        }
        _emit(payload, args.out)
        return EXIT_OK
    if args.action == "derive":
        _emit(subset_report_to_json(m.derived_sets(guard_n=args.guard_n)), args.out)
        return EXIT_OK
    if args.action == "dual":
        _emit(matroid_to_json(m.dual()), args.out)
        return EXIT_OK
    if args.action == "minor":
        cmask = mask_of(_parse_elements(args.contract)) if args.contract else 0
        dmask = mask_of(_parse_elements(args.delete)) if args.delete else 0
        if cmask & dmask:
            raise MigError("contract and delete sets overlap")
        out = m.contract(cmask) if cmask else m
        if dmask:
            # translate original indices to the re-indexed minor
            survivors = [e for e in range(m.n) if not cmask >> e & 1]
            shifted = mask_of(
                survivors.index(e) for e in elements_of(dmask)
            )
            out = out.delete(shifted)
        _emit(matroid_to_json(out), args.out)
        return EXIT_OK
    if args.action == "tutte":
        t = m.tutte_polynomial(guard_n=args.guard_n)
        payload = {
            "tutte": tutte_to_json(t),
            "characteristic": list(m.characteristic_polynomial(guard_n=args.guard_n)),
        }
        _emit(payload, args.out)
        return EXIT_OK
    raise MigError(f"unknown matroid action {args.action}")


def _jsonable_predicates(m) -> dict:
    p = m.predicates()
    return {
        k: (v if v is not None else "infinite") for k, v in p.items()
    }


def cmd_cover(args) -> int:
    m = load_matroid(args.file)
    kind = _structure(args)
    res = covers(m, kind)
    _emit(
        {
            "structure": kind.value,
            "covers": res.covered,
            "witness": res.witness,
        },
        args.out,
    )
    return EXIT_OK if res.covered else EXIT_NEGATIVE


def cmd_graph(args) -> int:
    from .relgraph import automorphism_group, build_graph

    m = load_matroid(args.file)
    kind = _structure(args)
    g = build_graph(m, kind)
    if args.action == "build":
        payload = {
            "vertices": [v.to_json() for v in g.vertices],
            "edges": {"1": g.edges(1), "2": g.edges(2)},
        }
        _emit(payload, args.out)
        return EXIT_OK
    if args.action == "aut":
        grp = automorphism_group(g)
        _emit(grp.to_json(), args.out)
        return EXIT_OK
    raise MigError(f"unknown graph action {args.action}")


def cmd_iso(args) -> int:
    from .relgraph import find_matroid_isomorphism

    m = load_matroid(args.first)
    n = load_matroid(args.second)
    hit = find_matroid_isomorphism(m, n, _structure(args))
    if hit is None:
        _emit({"isomorphic": False, "groundMap": None}, args.out)
        return EXIT_NEGATIVE
    ground, mapping = hit
    _emit(
        {"isomorphic": True, "map": list(mapping), "groundMap": list(ground)},
        args.out,
    )
    return EXIT_OK


def cmd_game(args) -> int:
    from .game import (
        DeterministicStrategy,
        IsoGameInstance,
        check_bisynchronous,
        evaluate_strategy,
    )

    m = load_matroid(args.first)
    n = load_matroid(args.second)
    inst = IsoGameInstance(m, n, _structure(args))
    if args.action == "check":
        ok = check_bisynchronous(inst)
        _emit({"alphabet": inst.size(), "bisynchronous": ok}, args.out)
        return EXIT_OK if ok else EXIT_NEGATIVE
    if args.action == "eval-strategy":
        if not args.strategy:
            raise MigError("eval-strategy needs --strategy FILE")
        with open(args.strategy, "r", encoding="utf-8") as fp:
            mapping = tuple(json.load(fp)["map"])
        verdict = evaluate_strategy(inst, DeterministicStrategy(mapping))
        _emit(verdict, args.out)
        return EXIT_OK if verdict["perfect"] else EXIT_NEGATIVE
    raise MigError(f"unknown game action {args.action}")


def _signs_from_args(m, negate: Optional[List[str]]):
    from .lbcs_construct import SignAssignment

    negatives = [_parse_elements(t) for t in (negate or [])]
    return SignAssignment.with_negatives(m, negatives)


def cmd_lbcs(args) -> int:
    from .game import lbcs_solutions
    from .game import LBCS
    from .lbcs_construct import grid_matroid, lbcs_from_matroid

    if args.action == "build":
        m = grid_matroid()
        lbcs = lbcs_from_matroid(m, _signs_from_args(m, args.negate))
        _emit(lbcs.to_json(), args.out)
        return EXIT_OK
    if args.action == "solve":
        if not args.file:
            raise MigError("lbcs solve needs a system file")
        with open(args.file, "r", encoding="utf-8") as fp:
            lbcs = LBCS.from_json(json.load(fp))
        sols = lbcs_solutions(lbcs)
        _emit(
            {"count": len(sols), "solutions": [list(s) for s in sols]},
            args.out,
        )
        return EXIT_OK if sols else EXIT_NEGATIVE
    if args.action == "from-matroid":
        if not args.file:
            raise MigError("lbcs from-matroid needs a matroid file")
        m = load_matroid(args.file)
        lbcs = lbcs_from_matroid(m, _signs_from_args(m, args.negate))
        _emit(lbcs.to_json(), args.out)
        return EXIT_OK
    raise MigError(f"unknown lbcs action {args.action}")


def cmd_ms_construct(args) -> int:
    from .lbcs_construct import m_s_matroid

    m = load_matroid(args.file)
    out = m_s_matroid(m, _signs_from_args(m, args.negate))
    _emit(matroid_to_json(out), args.out)
    return EXIT_OK


def cmd_paper_pair(args) -> int:
    from .lbcs_construct import build_paper_pair

    p, q = build_paper_pair()
    if not args.verify_all:
        _emit({"P": matroid_to_json(p), "Q": matroid_to_json(q)}, args.out)
        return EXIT_OK
    payload = _full_pair_certificate(p, q, args.tolerance)
    _emit(payload, args.out)
    return EXIT_OK if payload["allChecksPassed"] else EXIT_NEGATIVE


def _full_pair_certificate(p, q, tol: float) -> dict:
    from .algebra import screen_quantum_iso
    from .game import lbcs_solutions
    from .lbcs_construct import (
        BOTTOM_ROW,
        SignAssignment,
        grid_matroid,
        lbcs_from_matroid,
        minor_obstruction_certificate,
        shared_invariant_report,
    )
    from .quantum import (
        iso_game_pvms,
        magic_square_observables,
        verify_lbcs_quantum_strategy,
        verify_sync_conditions,
    )
    from .relgraph import build_graph, find_isomorphism

    kind = IsoStructure.NONBASES
    base = grid_matroid()
    hom = lbcs_from_matroid(base, SignAssignment.homogeneous(base))
    signed = lbcs_from_matroid(
        base, SignAssignment.with_negatives(base, [BOTTOM_ROW])
    )
    grid = magic_square_observables()
    lbcs_report = {
        "homogeneousSolutions": len(lbcs_solutions(hom)),
        "signedSolutions": len(lbcs_solutions(signed)),
        "quantum": verify_lbcs_quantum_strategy(signed, grid, tol),
    }
    mapping = find_isomorphism(build_graph(p, kind), build_graph(q, kind))
    strategy = iso_game_pvms(p, q, grid)
    sync = verify_sync_conditions(strategy, p, q, kind, tol)
    invariants = shared_invariant_report(p, q)
    screen = screen_quantum_iso(p, q, kind).to_json()
    minor = minor_obstruction_certificate(p, q)
    oracle = _oracle_spot_check()
    covering = _covering_spot_check()
    certificates = _certificate_spot_check()
    mismatch_screen = screen_quantum_iso(
        _u(2, 3), _u(2, 4), IsoStructure.BASES
    ).to_json()
    checks = {
        "pairShape": p.n == q.n == 18
        and p.rank == q.rank == 3
        and len(p.nonbases()) == len(q.nonbases()) == 24,
        "notIsomorphic": mapping is None,
        "minorObstruction": minor["pSideScan"]["matches"] == 0,
        "sharedInvariants": bool(invariants["allCountsEqual"])
        and bool(invariants["tutteEqual"]),
        "classicalGap": lbcs_report["homogeneousSolutions"] == 16
        and lbcs_report["signedSolutions"] == 0,
        "quantumLbcsPerfect": bool(lbcs_report["quantum"]["perfect"]),
        "quantumPairStrategy": bool(sync["perfect"]),
        "screenPasses": screen["verdict"] == "possibly quantum isomorphic",
        "screenRejectsMismatch": mismatch_screen["verdict"]
        == "not quantum isomorphic",
        "oracleSpotCheck": oracle["mismatches"] == 0,
        "coveringSpotCheck": covering["disagreements"] == 0,
        "noncommCertificates": certificates["allValid"],
    }
    return {
        "pair": {"P": matroid_to_json(p), "Q": matroid_to_json(q)},
        "lbcs": lbcs_report,
        "isomorphismSearch": {"found": mapping is not None},
        "syncConditions": sync,
        "sharedInvariants": invariants,
        "screen": screen,
        "screenMismatchControl": mismatch_screen,
        "minorObstruction": minor,
        "oracleSpotCheck": oracle,
        "coveringSpotCheck": covering,
        "noncommCertificates": certificates,
        "checks": checks,
        "allChecksPassed": all(checks.values()),
    }


def _u(r, n):
    from .matroid import uniform_matroid

    return uniform_matroid(r, n)


def _oracle_spot_check() -> dict:
    """Graph-route verdicts vs brute force over the 3-element catalog."""
    from .catalog import all_matroids
    from .matroid import brute_force_isomorphic
    from .relgraph import find_matroid_isomorphism
    from .structures import covers

    compared = 0
    mismatches = 0
    mats = all_matroids(3)
    for m in mats:
        for n in mats:
            truth = brute_force_isomorphic(m, n) is not None
            for kind in IsoStructure:
                if not (covers(m, kind).covered and covers(n, kind).covered):
                    continue
                got = find_matroid_isomorphism(m, n, kind) is not None
                compared += 1
                if got != truth:
                    mismatches += 1
    return {"compared": compared, "mismatches": mismatches}


def _covering_spot_check() -> dict:
    """Definition/characterization agreement over the 4-element catalog."""
    from .catalog import all_matroids
    from .errors import InvariantViolation

    checked = 0
    disagreements = 0
    for n in range(5):
        for m in all_matroids(n):
            for kind in (
                IsoStructure.BASES,
                IsoStructure.CIRCUITS,
                IsoStructure.NONBASES,
            ):
                try:
                    covers(m, kind)
                except InvariantViolation:
                    disagreements += 1
                checked += 1
    return {"checked": checked, "disagreements": disagreements}


def _certificate_spot_check() -> dict:
    """Disjoint-automorphism certificates for the two-line family."""
    from .algebra import noncommutativity_certificate
    from .matroid import matroid_from_nonbases

    results = {}
    for r in (3, 4, 5):
        n = r + 2
        full = (1 << n) - 1
        m = matroid_from_nonbases(n, r, [full ^ 0b0011, full ^ 0b1100])
        cert = noncommutativity_certificate(m, IsoStructure.NONBASES)
        results[f"rank{r}"] = bool(cert and cert["verification"]["valid"])
    results["allValid"] = all(results.values())
    return results


def cmd_quantum(args) -> int:
    from .lbcs_construct import (
        BOTTOM_ROW,
        SignAssignment,
        build_paper_pair,
        grid_matroid,
        lbcs_from_matroid,
    )
    from .quantum import (
        iso_game_pvms,
        magic_square_observables,
        verify_lbcs_quantum_strategy,
        verify_sync_conditions,
    )

    grid = magic_square_observables()
    if args.action == "magic-square":
        base = grid_matroid()
        signed = lbcs_from_matroid(
            base, SignAssignment.with_negatives(base, [BOTTOM_ROW])
        )
        report = verify_lbcs_quantum_strategy(signed, grid, args.tolerance)
        _emit(report, args.out)
        return EXIT_OK if report["perfect"] else EXIT_NEGATIVE
    if args.action == "verify-iso":
        p, q = build_paper_pair()
        strategy = iso_game_pvms(p, q, grid)
        report = verify_sync_conditions(
            strategy, p, q, IsoStructure.NONBASES, args.tolerance
        )
        _emit(report, args.out)
        return EXIT_OK if report["perfect"] else EXIT_NEGATIVE
    raise MigError(f"unknown quantum action {args.action}")


def cmd_screen(args) -> int:
    from .algebra import screen_quantum_iso

    m = load_matroid(args.first)
    n = load_matroid(args.second)
    report = screen_quantum_iso(
        m, n, _structure(args), allow_noncovering=args.force
    )
    _emit(report.to_json(), args.out)
    return EXIT_OK if report.verdict == "possibly quantum isomorphic" else EXIT_NEGATIVE


def cmd_export_relations(args) -> int:
    from .algebra import (
        export_comparison_substitution,
        export_groundset_relations,
        export_pointed_relations,
    )

    m = load_matroid(args.first)
    n = load_matroid(args.second)
    kind = _structure(args)
    if args.grid == "pointed":
        bundle = export_pointed_relations(m, n, kind)
    else:
        bundle = export_groundset_relations(m, n, kind)
    text = bundle.to_text()
    if args.with_substitution:
        sub = export_comparison_substitution(m, n, kind)
        text += "".join(
            f"subst {k} = {' + '.join(v)}\n" for k, v in sorted(sub.items())
        )
    _emit(text, args.out)
    return EXIT_OK


def cmd_noncomm_cert(args) -> int:
    from .algebra import noncommutativity_certificate

    m = load_matroid(args.file)
    cert = noncommutativity_certificate(m, _structure(args))
    if cert is None:
        _emit({"certificate": None}, args.out)
        return EXIT_NEGATIVE
    _emit({"certificate": cert}, args.out)
    return EXIT_OK


# -- parser --------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mig", description="matroid isomorphism games toolkit"
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_common(p, out=True):
        if out:
            p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument(
            "--guard-n",
            type=int,
            default=24,
            help="full-lattice enumeration guard",
        )
        p.add_argument(
            "--tolerance",
            type=float,
            default=1e-9,
            help="numeric tolerance for quantum checks",
        )

    def add_structure(p):
        p.add_argument(
            "--structure",
            required=True,
            choices=[k.value for k in IsoStructure],
        )

    p = sub.add_parser("matroid", help="construction-free matroid queries")
    p.add_argument("action", choices=["info", "derive", "dual", "minor", "tutte"])
    p.add_argument("file")
    p.add_argument("--delete", help="comma-separated elements to delete")
    p.add_argument("--contract", help="comma-separated elements to contract")
    add_common(p)
    p.set_defaults(func=cmd_matroid)

    p = sub.add_parser("cover", help="does the structure cover the matroid?")
    p.add_argument("file")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser("graph", help="relation colored graph operations")
    p.add_argument("action", choices=["build", "aut"])
    p.add_argument("file")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("iso", help="search for a matroid isomorphism")
    p.add_argument("first")
    p.add_argument("second")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("game", help="isomorphism game checks")
    p.add_argument("action", choices=["check", "eval-strategy"])
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--strategy", help="strategy JSON file for eval-strategy")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("lbcs", help="linear binary constraint systems")
    p.add_argument("action", choices=["build", "solve", "from-matroid"])
    p.add_argument("file", nargs="?")
    p.add_argument(
        "--negate",
        action="append",
        help="comma-separated constraint variable set to negate (repeatable)",
    )
    add_common(p)
    p.set_defaults(func=cmd_lbcs)

    p = sub.add_parser("ms-construct", help="doubled matroid of a signed system")
    p.add_argument("file")
    p.add_argument("--negate", action="append")
    add_common(p)
    p.set_defaults(func=cmd_ms_construct)

    p = sub.add_parser("paper-pair", help="the 18-element demonstration pair")
    p.add_argument("--verify-all", action="store_true")
    add_common(p)
    p.set_defaults(func=cmd_paper_pair)

    p = sub.add_parser("quantum", help="quantum strategy verification")
    p.add_argument("action", choices=["magic-square", "verify-iso"])
    add_common(p)
    p.set_defaults(func=cmd_quantum)

    p = sub.add_parser("screen", help="necessary-condition screen")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--force", action="store_true", help="run even without covering")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_screen)

    p = sub.add_parser("export-relations", help="emit algebra relation bundles")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--grid", choices=["pointed", "groundset"], default="pointed")
    p.add_argument("--with-substitution", action="store_true")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_export_relations)

    p = sub.add_parser("noncomm-cert", help="disjoint-automorphism certificate")
    p.add_argument("file")
    add_structure(p)
    add_common(p)
    p.set_defaults(func=cmd_noncomm_cert)

    return top


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (MigError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
