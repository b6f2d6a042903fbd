"""Command-line surface: verdict exit codes, determinism, error mapping."""

import json

import pytest

from mig import uniform_matroid
from mig.cli import main
from mig.jsonio import dumps, matroid_to_json


@pytest.fixture(scope="module")
def files(tmp_path_factory, paper_pair):
    tmp = tmp_path_factory.mktemp("cli")
    p, q = paper_pair
    paths = {}
    for name, m in (
        ("u23", uniform_matroid(2, 3)),
        ("u24", uniform_matroid(2, 4)),
        ("u13", uniform_matroid(1, 3)),
        ("P", p),
        ("Q", q),
    ):
        path = tmp / f"{name}.json"
        path.write_text(dumps(matroid_to_json(m)))
        paths[name] = str(path)
    paths["dir"] = tmp
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_matroid_info(files, capsys):
    code, out, _ = run(capsys, "matroid", "info", files["u23"])
    assert code == 0
    data = json.loads(out)
    assert data["predicates"]["girth"] == 3
    assert data["predicates"]["connectivity"] == "infinite"


def test_matroid_derive_and_tutte(files, capsys):
    code, out, _ = run(capsys, "matroid", "derive", files["u23"])
    assert code == 0
    data = json.loads(out)
    assert data["circuits"] == [[0, 1, 2]]
    assert data["girth"] == 3
    code, out, _ = run(capsys, "matroid", "tutte", files["u23"])
    data = json.loads(out)
    assert data["tutte"]["terms"] == [
        {"x": 0, "y": 1, "c": 1},
        {"x": 1, "y": 0, "c": 1},
        {"x": 2, "y": 0, "c": 1},
    ]
    assert data["characteristic"] == [2, -3, 1]


def test_matroid_dual_and_minor(files, capsys):
    code, out, _ = run(capsys, "matroid", "dual", files["u23"])
    assert code == 0 and json.loads(out)["rank"] == 1
    code, out, _ = run(
        capsys, "matroid", "minor", files["u24"], "--contract", "0", "--delete", "1"
    )
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 2 and data["rank"] == 1


def test_cover_exit_codes(files, capsys):
    assert run(capsys, "cover", files["u23"], "--structure", "bases")[0] == 0
    assert run(capsys, "cover", files["u23"], "--structure", "nonbases")[0] == 1


def test_iso_exit_codes(files, capsys):
    code, out, _ = run(
        capsys, "iso", files["u23"], files["u23"], "--structure", "bases"
    )
    assert code == 0 and json.loads(out)["isomorphic"]
    code, out, _ = run(
        capsys, "iso", files["u23"], files["u13"], "--structure", "flats"
    )
    assert code == 1 and not json.loads(out)["isomorphic"]


def test_game_commands(files, capsys):
    code, out, _ = run(
        capsys, "game", "check", files["u23"], files["u23"], "--structure", "bases"
    )
    assert code == 0 and json.loads(out)["bisynchronous"]
    strategy = files["dir"] / "strategy.json"
    strategy.write_text(json.dumps({"map": [6, 7, 8, 9, 10, 11, 0, 1, 2, 3, 4, 5]}))
    code, out, _ = run(
        capsys,
        "game",
        "eval-strategy",
        files["u23"],
        files["u23"],
        "--structure",
        "bases",
        "--strategy",
        str(strategy),
    )
    assert code == 0 and json.loads(out)["perfect"]


def test_lbcs_pipeline(files, capsys):
    signed = files["dir"] / "signed.json"
    code, _, _ = run(capsys, "lbcs", "build", "--negate", "6,7,8", "--out", str(signed))
    assert code == 0
    code, out, _ = run(capsys, "lbcs", "solve", str(signed))
    assert code == 1 and json.loads(out)["count"] == 0
    hom = files["dir"] / "hom.json"
    code, _, _ = run(capsys, "lbcs", "build", "--out", str(hom))
    code, out, _ = run(capsys, "lbcs", "solve", str(hom))
    assert code == 0 and json.loads(out)["count"] == 16


def test_ms_construct_roundtrip(files, capsys):
    grid_file = files["dir"] / "grid.json"
    from mig.lbcs_construct import grid_matroid

    grid_file.write_text(dumps(matroid_to_json(grid_matroid())))
    code, out, _ = run(capsys, "ms-construct", str(grid_file), "--negate", "6,7,8")
    assert code == 0
    data = json.loads(out)
    assert data["n"] == 18 and len(data["nonbases"]) == 24


def test_quantum_commands(capsys):
    code, out, _ = run(capsys, "quantum", "magic-square")
    assert code == 0 and json.loads(out)["perfect"]
    code, out, _ = run(capsys, "quantum", "verify-iso")
    assert code == 0 and json.loads(out)["perfect"]


def test_paper_pair_commands(files, capsys):
    code, out, _ = run(capsys, "paper-pair")
    assert code == 0
    data = json.loads(out)
    assert data["P"]["n"] == 18 and len(data["Q"]["nonbases"]) == 24
    code, out, _ = run(capsys, "paper-pair", "--verify-all")
    assert code == 0
    cert = json.loads(out)
    assert cert["allChecksPassed"] is True
    assert cert["minorObstruction"]["pSideScan"]["subsets"] == 48620
    assert cert["oracleSpotCheck"]["mismatches"] == 0


def test_screen_exit_codes(files, capsys):
    assert (
        run(capsys, "screen", files["P"], files["Q"], "--structure", "nonbases")[0]
        == 0
    )
    assert (
        run(capsys, "screen", files["u23"], files["u24"], "--structure", "bases")[0]
        == 1
    )


def test_export_relations(files, capsys):
    code, out, _ = run(
        capsys,
        "export-relations",
        files["u23"],
        files["u23"],
        "--structure",
        "bases",
        "--with-substitution",
    )
    assert code == 0
    assert out.startswith("grid POINTED 6 6\n")
    assert "subst w[0][0] = u[0][0] + u[0][2]\n" in out
    code, out, _ = run(
        capsys,
        "export-relations",
        files["u23"],
        files["u23"],
        "--structure",
        "bases",
        "--grid",
        "groundset",
    )
    assert code == 0 and out.startswith("grid GROUNDSET 3 3\n")


def test_noncomm_cert(files, capsys):
    ex = files["dir"] / "twolines.json"
    from mig import matroid_from_nonbases

    ex.write_text(
        dumps(matroid_to_json(matroid_from_nonbases(5, 3, [[0, 1, 4], [2, 3, 4]])))
    )
    code, out, _ = run(capsys, "noncomm-cert", str(ex), "--structure", "nonbases")
    assert code == 0 and json.loads(out)["certificate"] is not None
    code, out, _ = run(capsys, "noncomm-cert", files["u23"], "--structure", "bases")
    assert code == 1 and json.loads(out)["certificate"] is None


def test_graph_commands(files, capsys):
    code, out, _ = run(capsys, "graph", "build", files["u23"], "--structure", "bases")
    assert code == 0
    data = json.loads(out)
    assert len(data["vertices"]) == 6
    assert len(data["edges"]["1"]) == 3 and len(data["edges"]["2"]) == 3
    code, out, _ = run(capsys, "graph", "aut", files["u23"], "--structure", "bases")
    assert code == 0 and json.loads(out)["order"] == "6"


def test_byte_determinism(files, capsys):
    outs = set()
    for _ in range(2):
        _, out, _ = run(
            capsys, "iso", files["u23"], files["u23"], "--structure", "bases"
        )
        outs.add(out)
    assert len(outs) == 1


def test_error_exit_code(files, capsys):
    code, _, err = run(capsys, "matroid", "info", "/nonexistent.json")
    assert code == 2 and "error:" in err
    bad = files["dir"] / "bad.json"
    bad.write_text('{"n": 3}')
    code, _, err = run(capsys, "matroid", "info", str(bad))
    assert code == 2
    code, _, _ = run(capsys, "matroid", "frobnicate", files["u23"])
    assert code == 2
