import io
import json
import subprocess
import sys

import pytest

from k2forge import catalog
from k2forge.cli import Report, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def alg_file(tmp_path):
    def write(name, text=None):
        p = tmp_path / f"{name}.alg"
        p.write_text(text if text is not None else catalog.CORPUS[name])
        return str(p)
    return write


def test_check_not_k2_exit_code_and_witness(capsys, alg_file):
    code, out, _ = run(["check", alg_file("small_not_k2")], capsys)
    assert code == 20
    assert "not_K2" in out and "n=3" in out


def test_check_conclusive(capsys):
    code, out, _ = run(["check", "corpus:central_cube"], capsys)
    assert code == 0
    assert "K2_conclusive (conclusive)" in out


def test_check_up_to_bound(capsys):
    code, out, _ = run(["check", "corpus:ci_cubic", "--n-max", "4", "--d-max", "8"], capsys)
    assert code == 10
    assert "through (n_max=4, d_max=8)" in out


def test_monomial_routing_and_force_general(capsys):
    code, out, _ = run(["check", "corpus:monomial_k2"], capsys)
    assert code == 0 and "engine    monomial" in out
    assert "S_3       {}" in out
    code, out, _ = run(["check", "corpus:monomial_levels", "--force-general", "--n-max", "3", "--d-max", "7"], capsys)
    assert code == 20 and "engine    general" in out


def test_monomial_command(capsys):
    code, out, _ = run(["monomial", "corpus:monomial_k2"], capsys)
    assert code == 0 and "S_2       {xxx, yxx}" in out
    code, _, err = run(["monomial", "corpus:central_cube"], capsys)
    assert code == 1 and "monomial" in err


def test_input_errors(capsys, alg_file):
    code, _, err = run(["check", alg_file("bad", "algebra A gens x y\nrel x + y\n")], capsys)
    assert code == 1 and ":2:5:" in err
    code, _, err = run(["check", "/nonexistent/file.alg"], capsys)
    assert code == 1
    code, _, err = run(["check", "corpus:nope"], capsys)
    assert code == 1
    code, _, err = run(["check", "corpus:small_not_k2", "--d-max", "2"], capsys)
    assert code == 1


def test_stdin_input(capsys, monkeypatch):
    monkeypatch.setattr(sys, "stdin", io.StringIO("algebra P gens x y\nrel x*y - y*x\n"))
    code, out, _ = run(["check", "-", "--d-max", "6"], capsys)
    assert code == 0


def test_json_report_is_deterministic_and_round_trips(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        run(["check", "corpus:small_not_k2", "--json", str(p), "--verify", "--certify"], capsys)
    a, b = (p.read_bytes() for p in paths)
    assert a == b
    data = json.loads(a)
    for key in ("algebra", "field", "bounds", "verdict", "witness", "betti", "hilbert", "levels", "checks"):
        assert key in data
    assert data["bounds"] == {"n_max": 6, "d_max": 10}
    assert data["witness"]["n"] == 3
    assert data["hilbert"][:4] == [1, 2, 2, 0]
    assert data["checks"] == {"d2zero": True, "exact": True, "minimal": True}
    rep = Report.from_json(a.decode())
    assert rep.to_json().encode() == a


def test_json_to_stdout_only(capsys):
    code, out, _ = run(["check", "corpus:monomial_levels", "--json", "-"], capsys)
    data = json.loads(out)
    assert data["levels"][0] == ["w", "x", "y", "z"]
    assert data["witness"]["level"] == 2


def test_field_override(capsys):
    code, out, _ = run(["check", "corpus:central_cube", "--field", "q", "--json", "-"], capsys)
    assert json.loads(out)["field"] == "q"
    assert code == 0
    code, _, err = run(["check", "corpus:central_cube", "--field", "gf:10"], capsys)
    assert code == 1


def test_construct_quotient_then_check(capsys, tmp_path):
    out_file = tmp_path / "B.alg"
    code, _, _ = run(["construct", "corpus:central_cube", "--directive", "quotient g=y^3", "-o", str(out_file)],
                     capsys)
    assert code == 0
    text = out_file.read_text()
    assert "rel y^3" in text
    code, out, _ = run(["check", str(out_file)], capsys)
    assert code == 20


def test_construct_directives_in_file(capsys, alg_file):
    path = alg_file("plane", "algebra plane gens x y\nrel x*y - y*x\nconstruct twist sigma=x->x, y->5*y\n")
    code, out, _ = run(["construct", path], capsys)
    assert code == 0 and "algebra plane_tw" in out


@pytest.mark.parametrize("directive", ["ore delta=y->y^2", "ci forms=x^3", "tensor with=corpus:cubic_one_var"])
def test_construct_kinds(capsys, directive):
    src = {"ore": "corpus:ore_base", "ci": "corpus:polynomial_plane", "tensor": "corpus:quadratic_not_koszul"}
    kind = directive.split()[0]
    code, out, err = run(["construct", src[kind], "--directive", directive], capsys)
    if kind == "tensor":
        assert code == 1 and "collide" in err  # both factors use the generator x
    else:
        assert code == 0 and out.startswith("field ")


def test_construct_errors(capsys):
    code, _, err = run(["construct", "corpus:polynomial_plane"], capsys)
    assert code == 1
    code, _, err = run(["construct", "corpus:polynomial_plane", "--directive", "frobnicate x=1"], capsys)
    assert code == 1 and "unknown construction" in err
    code, _, err = run(["construct", "corpus:quadratic_not_koszul", "--directive", "quotient g=x"], capsys)
    assert code == 1 and "not normal" in err


def test_resolve_betti_hilbert(capsys):
    code, out, _ = run(["hilbert", "corpus:small_not_k2", "--d-max", "5"], capsys)
    assert code == 0 and "hilbert   1 2 2 0 0 0" in out
    code, out, _ = run(["betti", "corpus:small_not_k2", "--n-max", "3", "--d-max", "6"], capsys)
    assert "Q^3: 3 4^4" in out
    code, out, _ = run(["resolve", "corpus:central_cube", "--json", "-", "--verify"], capsys)
    data = json.loads(out)
    assert data["certificate"]["terminated"] is True
    assert data["certificate"]["matrices"]["1"] == [["x"], ["y"]]


def test_module_resolution_flag(capsys):
    code, out, _ = run(["check", "corpus:polynomial_plane", "--module", "y", "--d-max", "6"], capsys)
    assert code == 0 and "general-module" in out


def test_list(capsys):
    code, out, _ = run(["list"], capsys)
    assert "central_cube" in out.split()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "k2forge", "check", "corpus:small_not_k2"],
                          capture_output=True, text=True)
    assert proc.returncode == 20
    assert "not_K2" in proc.stdout


def test_invariant_violation_exit_code(capsys, monkeypatch):
    import k2forge.cli as cli

    def broken(res, g):
        return {"d2zero": False, "exact": True, "minimal": True, "lifts": True, "problems": ["forced"]}

    monkeypatch.setattr(cli, "verify", broken)
    code, _, err = run(["check", "corpus:central_cube", "--verify"], capsys)
    assert code == 2 and "forced" in err
