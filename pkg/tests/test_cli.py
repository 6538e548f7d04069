import json
import subprocess
import sys

import numpy as np
import pytest

from algebroids import cli
from algebroids import linalg as la
from algebroids.comodule import generator_witness, make_comodule
from algebroids.descent import comodule_of_descent, descent_of_comodule
from algebroids.equivariant import (comodule_from_equivariant, enumerate_comodules, enumerate_equivariant,
                                    equivariant_from_comodule)
from algebroids.fileformat import Workspace, load_text, parse, parse_file, serialize_entity
from algebroids.flat_descent import amitsur_check, cartesian_check
from algebroids.functoriality import adjunction_check, coinduce, induce
from algebroids.hopf import group_algebroid_components, make_hopf_algebroid


def ws_of(path):
    return Workspace(parse_file(path))


def derived(path, rep, name, kind):
    """Load an entity produced by a command alongside the original document."""
    return Workspace(parse(load_text(path) + "\n" + rep.derived)).get(name, kind)


def results_of(rep):
    return {c.id: c.passed for c in rep.checks}


def test_check_algebroid_matches_library(z2_file, klein_file):
    for path, name, action in ((z2_file, "G", "swap"), (klein_file, "GK", "klein"), (klein_file, "GS", "half")):
        rep = cli.run("check-algebroid", [path, "--name", name])
        act = ws_of(path).get(action, "group_action")
        lib = make_hopf_algebroid(*group_algebroid_components(act, "hk"), lenient=True)
        assert results_of(rep) == {k: v[0] for k, v in lib.results.items()}
        assert rep.exit_status == 0


def test_check_unit_algebroid():
    from algebroids import shipped_example
    rep = cli.run("check-algebroid", [shipped_example("unit_f2"), "--name", "U"])
    assert rep.exit_status == 0 and rep.data["dims"] == {"A0": 1, "A1": 1}


def test_check_comodule_matches_library(z2_file):
    ws = ws_of(z2_file)
    C = ws.get("O", "comodule")
    lib = make_comodule(C.H, C.M, C.psi, lenient=True)
    rep = cli.run("check-comodule", [z2_file, "--name", "O"])
    assert results_of(rep) == {k: v[0] for k, v in lib.results.items()}
    assert rep.exit_status == 0


def test_check_algebroid_hom(klein_file):
    rep = cli.run("check-algebroid-hom", [klein_file, "--name", "res"])
    lib = ws_of(klein_file).get("res", "algebroid_hom").report
    assert results_of(rep) == {k: v[0] for k, v in lib.results.items()}
    assert rep.exit_status == 0


def test_descent_round_trip_is_byte_identical(z2_file, tmp_path):
    d_path, c_path = str(tmp_path / "d.had"), str(tmp_path / "c.had")
    rep = cli.run("to-descent", [z2_file, "--name", "O", "--as", "D", "--out", d_path])
    assert rep.exit_status == 0
    lib = descent_of_comodule(ws_of(z2_file).get("O", "comodule"))
    assert np.array_equal(ws_of(d_path).get("D", "descent").tau, lib.tau)

    rep = cli.run("check-descent", [d_path, "--name", "D"])
    assert rep.exit_status == 0 and all(results_of(rep).values())

    rep = cli.run("to-comodule", [d_path, "--name", "D", "--as", "O", "--out", c_path])
    assert rep.exit_status == 0
    back = parse_file(c_path)
    orig = parse_file(z2_file)
    assert serialize_entity(back["O_2"]).replace("O_2", "O") == serialize_entity(orig["O"])
    C = comodule_of_descent(ws_of(d_path).get("D", "descent"))
    assert np.array_equal(ws_of(c_path).get("O_2", "comodule").psi, C.psi)


def test_induce_and_coinduce_match_library(klein_file):
    ws = ws_of(klein_file)
    f = ws.get("res", "algebroid_hom")
    rep = cli.run("induce", [klein_file, "--name", "OK", "--hom", "res", "--as", "I"])
    assert rep.exit_status == 0
    assert np.array_equal(derived(klein_file, rep, "I", "comodule").psi, induce(f, ws.get("OK", "comodule")).psi)
    rep = cli.run("coinduce", [klein_file, "--name", "extS", "--hom", "res", "--as", "U"])
    assert rep.exit_status == 0
    lib = coinduce(f, ws.get("extS", "comodule"))
    got = derived(klein_file, rep, "U", "comodule")
    assert got.M == lib.M and np.array_equal(got.psi, lib.psi) and rep.data["dim"] == lib.dim


def test_adjoint_check_matches_library(klein_file):
    ws = ws_of(klein_file)
    for hom, m, p in (("res", "OK", "OS"), ("res", "extK", "extS"), ("idK", "OK", "extK")):
        rep = cli.run("adjoint-check", [klein_file, "--name", m, "--hom", hom, "--with", p])
        lib = adjunction_check(ws.get(hom, "algebroid_hom"), ws.get(m, "comodule"), ws.get(p, "comodule"))
        assert (rep.data["dim_left"], rep.data["dim_right"]) == (lib.dim_left, lib.dim_right)
        assert rep.exit_status == 0


def test_equivariant_conversions_match_library(klein_file):
    ws = ws_of(klein_file)
    rep = cli.run("equivariant-to-comodule", [klein_file, "--name", "eqK", "--as", "C"])
    lib = comodule_from_equivariant(ws.get("eqK", "equivariant"), ws.get("GK", "algebroid"))
    assert np.array_equal(derived(klein_file, rep, "C", "comodule").psi, lib.psi)
    rep = cli.run("comodule-to-equivariant", [klein_file, "--name", "OK", "--as", "E"])
    lib = equivariant_from_comodule(ws.get("OK", "comodule"))
    assert derived(klein_file, rep, "E", "equivariant") == lib


def test_equivariant_enumerate_matches_library(z2_file):
    rep = cli.run("equivariant-enumerate", [z2_file, "--name", "swap", "--dim", "2"])
    ws = ws_of(z2_file)
    act, H = ws.get("swap", "group_action"), ws.get("G", "algebroid")
    for d in range(3):
        assert rep.data["counts"][d] == {"equivariant": len(enumerate_equivariant(act, d)),
                                         "comodule": len(enumerate_comodules(H, d))}
    assert rep.exit_status == 0 and len(rep.checks) == 9


def test_amitsur_matches_library(flat_file):
    ws = ws_of(flat_file)
    for hom, mod, status in (("inc", "F2sq", 0), ("q", "Dreg", 1), ("q", "X", 0)):
        rep = cli.run("amitsur", [flat_file, "--name", hom, "--module", mod])
        lib = amitsur_check(ws.get(hom, "hom"), ws.get(mod, "module"))
        assert rep.exit_status == status
        assert (rep.data["image_dim"], rep.data["agreement_dim"]) == (lib.image_dim, lib.agreement_dim)
    rep = cli.run("amitsur", [flat_file, "--name", "q", "--module", "Dreg"])
    assert [c.error for c in rep.checks if not c.passed][0] == "NotInjective"


def test_cartesian_check_matches_library(flat_file):
    ws = ws_of(flat_file)
    for name, status in (("good", 0), ("bad", 1)):
        r = ws.get(name, "restriction")
        lib = cartesian_check(r.arrow, r.source, r.target, r.matrix)
        rep = cli.run("cartesian-check", [flat_file, "--name", name])
        assert rep.exit_status == status and rep.data["rank"] == lib.rank


def test_generator_witness_matches_library(z2_file):
    C = ws_of(z2_file).get("O", "comodule")
    rep = cli.run("generator-witness", [z2_file, "--name", "O", "--seed", "7"])
    assert rep.seed == 7 and "seed: 7" in rep.render()
    rng, x = np.random.default_rng(7), [0, 0]
    while not any(x):
        x = rng.integers(0, 3, 2).tolist()
    assert rep.data["x"] == x
    w = generator_witness(C, x)
    assert rep.data["preimage"] == la.asmat(w.preimage, 3).tolist() and rep.exit_status == 0
    rep = cli.run("generator-witness", [z2_file, "--name", "O", "--vector", "1 2"])
    assert rep.data["x"] == [1, 2] and rep.exit_status == 0


def test_broken_coaction_exits_one(z2_file, tmp_path):
    text = load_text(z2_file)
    head, tail = text.split("comodule O {")
    body = tail.replace("1", "0")
    path = tmp_path / "broken.had"
    path.write_text(head + "comodule O {" + body)
    rep = cli.run("check-comodule", [str(path), "--name", "O"])
    assert rep.exit_status == 1
    assert "NotCounital" in [c.error for c in rep.checks if not c.passed]


@pytest.mark.parametrize("argv", [
    ["check-comodule", "/nonexistent.had", "--name", "O"],
    ["check-comodule", "{z2}", "--name", "missing"],
    ["equivariant-enumerate", "{z2}", "--name", "swap", "--ceiling", "10"],
    ["amitsur", "{flat}", "--name", "inc"],
])
def test_input_errors_exit_two(argv, z2_file, flat_file):
    argv = [a.format(z2=z2_file, flat=flat_file) for a in argv]
    rep = cli.run(argv[0], argv[1:])
    assert rep.exit_status == 2 and rep.input_error


def test_syntax_error_exits_two(tmp_path):
    path = tmp_path / "bad.had"
    path.write_text("had 1\nalgebra B { p = }\n")
    rep = cli.run("check-algebroid", [str(path), "--name", "B"])
    assert rep.exit_status == 2 and rep.input_error.startswith("ParseError")


def test_main_writes_json(z2_file, tmp_path, capsys, monkeypatch):
    out = tmp_path / "r.json"
    assert cli.main(["check-comodule", z2_file, "--name", "O", "--json", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["schema"] == cli.REPORT_SCHEMA and data["exit_status"] == 0
    assert "PASS counit" in capsys.readouterr().out
    monkeypatch.setenv(cli.REPORT_DIR_ENV, str(tmp_path))
    cli.main(["check-algebroid", z2_file, "--name", "G"])
    assert json.loads((tmp_path / "check-algebroid-G.json").read_text())["command"] == "check-algebroid"


def test_module_entry_point_exit_codes(z2_file):
    ok = subprocess.run([sys.executable, "-m", "algebroids", "check-comodule", z2_file, "--name", "O"],
                        capture_output=True, text=True)
    assert ok.returncode == 0 and "exit status: 0" in ok.stdout
    bad = subprocess.run([sys.executable, "-m", "algebroids", "check-comodule", z2_file, "--name", "nope"],
                         capture_output=True, text=True)
    assert bad.returncode == 2


def test_comodule_then_descent_round_trip(z2_file, tmp_path):
    d1, c1, d2 = (str(tmp_path / n) for n in ("d1.had", "c1.had", "d2.had"))
    cli.run("to-descent", [z2_file, "--name", "O", "--as", "D", "--out", d1])
    cli.run("to-comodule", [d1, "--name", "D", "--as", "C", "--out", c1])
    rep = cli.run("to-descent", [c1, "--name", "C", "--as", "D2", "--out", d2])
    assert rep.exit_status == 0
    doc = parse_file(d2)
    assert serialize_entity(doc["D2"]).replace("D2", "D") == serialize_entity(doc["D"])
