import json
import subprocess
import sys

import pytest

from quadtors.cli import main
from quadtors.paramcheck import fixture_sha256


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_torsion_text_and_json(capsys):
    code, out, _ = run(capsys, "torsion", "--a", "1", "--d", "-3")
    assert code == 0 and out.splitlines()[0] == "Z/2 x Z/6"
    code, out, _ = run(capsys, "torsion", "--a", "1", "--d", "-3", "--json")
    data = json.loads(out)
    assert code == 0 and (data["n1"], data["n2"], data["group"]) == (2, 6, "Z/2 x Z/6")
    assert len(data["points"]) == 12


def test_text_and_json_agree(capsys):
    for cmd in ("torsion", "two-torsion", "three-torsion"):
        _, text, _ = run(capsys, cmd, "--a", "16", "--d", "-3")
        _, js, _ = run(capsys, cmd, "--a", "16", "--d", "-3", "--json")
        data = json.loads(js)
        listed = [line.strip() for line in text.splitlines() if line.startswith("  ")]
        assert listed == data["points"]


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "--a", "16", "--d", "-3")
    assert code == 0
    assert out.splitlines() == ["shortlist: {Z/3, Z/9, Z/3 x Z/3}", "computed: Z/3 x Z/3", "member: true"]
    code, out, _ = run(capsys, "classify", "--a", "1", "--d", "5", "--json")
    assert json.loads(out)["shortlist"] == ["Z/6", "Z/12", "Z/18"]


def test_order_and_tate(capsys):
    code, out, _ = run(capsys, "order", "--a", "16", "--d", "-3", "--x", "2-2*sqrt(-3)", "--y", "-4*sqrt(-3)")
    assert (code, out.strip()) == (0, "3")
    code, out, _ = run(capsys, "order", "--a", "-2", "--d", "2", "--x", "3", "--y", "5")
    assert (code, out.strip()) == (0, "non-torsion")
    code, out, _ = run(capsys, "tate", "--a", "1", "--x", "2", "--y", "3", "--json")
    data = json.loads(out)
    assert (data["a1"], data["a2"], data["a3"], data["b"], data["c"], data["order"]) == ("4/3", "2/9", "2/9", "-2/9", "-1/3", 6)


def test_param_check(capsys, tmp_path):
    code, out, _ = run(capsys, "param-check", "--all-fields", "--d", "-3")
    assert code == 0 and out.splitlines()[0] == "INCONSISTENT"
    fx = tmp_path / "sys.txt"
    fx.write_text("[0, 0, 1] / [1] = 2\n[0, 0, 0, 0, 1] / [1] = 4\n")
    code, out, _ = run(capsys, "param-check", "--fixture", str(fx), "--d", "2", "--json")
    data = json.loads(out)
    assert data["verdict"] == "CONSISTENT" and data["field_roots"]["2"] == ["-sqrt(2)", "sqrt(2)"]


def test_scan(capsys, tmp_path):
    code, out, _ = run(capsys, "scan", "--a-list", "1", "--d-min", "-5", "--d-max", "5", "--no-timing")
    assert code == 0 and out.splitlines()[0] == "a,d,n1,n2,group_label,shortlist_ok,elapsed_ms,error"
    target = tmp_path / "out.json"
    cfg = tmp_path / "cfg.txt"
    cfg.write_text("a_values = 1\nd_min = -5\nd_max = 5\n")
    code, out, _ = run(capsys, "scan", "--config", str(cfg), "--out", str(target), "--format", "json", "--jobs", "2")
    assert code == 0 and len(json.loads(target.read_text())) == 7
    assert json.loads(out)["groups"] == {"Z/2 x Z/6": 1, "Z/6": 6}


@pytest.mark.parametrize(
    "argv,code,needle",
    [
        (["torsion", "--a", "0", "--d", "5"], 2, "singular curve"),
        (["torsion", "--a", "1", "--d", "0"], 2, "d"),
        (["torsion", "--a", "one", "--d", "5"], 2, "malformed"),
        (["torsion", "--a", "1", "--d", "5", "--bogus"], 2, "unrecognized"),
        (["classify", "--a", "2", "--d", "5"], 2, "not a perfect square"),
        (["two-torsion", "--a", "0", "--d", "5"], 2, "singular"),
        (["three-torsion", "--a", "1", "--d", "1"], 2, ""),
        (["order", "--a", "1", "--d", "5", "--x", "3", "--y", "1"], 2, "not on"),
        (["order", "--a", "1", "--d", "5", "--x", "sqrt(2)", "--y", "1"], 2, "sqrt(2)"),
        (["tate", "--a", "1", "--x", "0", "--y", "1"], 2, "order 3"),
        (["param-check", "--fixture", "/no/such/file"], 2, "cannot read"),
        (["scan", "--a-list", "1", "--d-min", "5", "--d-max", "1"], 2, "exceeds"),
        (["scan", "--d-min", "1", "--d-max", "5"], 2, "a_values"),
        ([], 2, "usage"),
    ],
)
def test_error_paths(capsys, argv, code, needle):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert needle in err


def test_internal_errors_exit_3(capsys, monkeypatch):
    from quadtors import cli
    from quadtors.errors import InternalInconsistency

    def boom(*_):
        raise InternalInconsistency("closure failed")

    monkeypatch.setattr(cli, "torsion_subgroup", boom)
    code, _, err = run(capsys, "torsion", "--a", "1", "--d", "5")
    assert code == 3 and "closure failed" in err


def test_d_canonicalised_with_warning(capsys):
    code, out, err = run(capsys, "torsion", "--a", "1", "--d", "-12")
    assert code == 0 and "squarefree kernel -3" in err and out.startswith("Z/2 x Z/6")


def test_version_and_console_script():
    proc = subprocess.run([sys.executable, "-m", "quadtors.cli", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0 and fixture_sha256() in proc.stdout
