import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from cyclecone import cli, verify

GOLDEN = Path(__file__).parent / "golden"

# name -> argv; every command and sub-action has at least one entry
CASES = {
    "intersect_n2_r3": ["intersect", "--n", "2", "--r", "3", "H{1} + H{2} - E1 - E2 - E3", "H{1} + H{2} - E1 - E2 - E3"],
    "intersect_ws": ["intersect", "--n", "3", "--r", "1", "--", "Ws(1)", "Ws(2)", "-E{1,2}"],
    "pair_n2": ["pair", "--n", "2", "--k", "1", "--r", "1", "H{1} + H{2} - E1", "H{2} - E1"],
    "cone_members": ["cone", "members", "--n", "2", "--k", "1", "--r", "2"],
    "cone_members_expr": ["cone", "members", "--n", "2", "--k", "1", "--r", "3", "H{1} + H{2} - E1 - E2 - E3"],
    "cone_dual": ["cone", "dual", "--n", "3", "--k", "1", "--r", "2"],
    "cone_decompose": ["cone", "decompose", "--n", "2", "--k", "1", "--r", "2", "2*H{2} + H{1} - E{1,1} - E{2,1}"],
    "fan_build_x2": ["fan", "build", "--preset", "x2", "--n", "2"],
    "fan_enumerate_p1n": ["fan", "enumerate", "--preset", "p1n", "--n", "3", "--codim", "2"],
    "fan_classes_x2": ["fan", "classes", "--preset", "x2", "--n", "3", "--codim", "2"],
    "fan_classes_x1": ["fan", "classes", "--preset", "x1", "--n", "3", "--codim", "2"],
    "fan_classes_x2fiber": ["fan", "classes", "--preset", "x2fiber", "--n", "3", "--codim", "1", "--s", "1"],
    "fan_classes_xtilde": ["fan", "classes", "--preset", "xtilde", "--n", "3", "--codim", "1"],
    "linsys_basis": ["linsys", "basis", "--n", "3", "--s", "1"],
    "linsys_baselocus": ["linsys", "baselocus", "--n", "4", "--s", "2"],
    "linsys_mult": ["linsys", "mult", "--n", "4", "--s", "3"],
    "linsys_restrict": ["linsys", "restrict", "--n", "3", "--s", "1"],
    "verify_thm_linear": ["verify", "thm-linear", "--max-n", "4"],
    "verify_d1_d2": ["verify", "prop-4-4"],
    "verify_all": ["verify", "all", "--max-n", "3"],
    "status_open": ["status", "--n", "4", "--k", "2", "--r", "5"],
    "status_text": ["--format", "text", "status", "--n", "5", "--k", "1", "--r", "121"],
}


def run_cli(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name, capsys):
    argv = CASES[name]
    code, out = run_cli(argv, capsys)
    assert code == 0
    path = GOLDEN / f"{name}.{'txt' if 'text' in argv else 'json'}"
    if os.environ.get("CYCLECONE_REGEN"):
        path.write_text(out, encoding="utf-8")
    assert out == path.read_text(encoding="utf-8")
    # a second run is byte-identical
    assert run_cli(argv, capsys)[1] == out


def test_examples(capsys):
    _, out = run_cli(CASES["verify_thm_linear"], capsys)
    data = json.loads(out)
    assert data["boundary_confirmed"] is True and data["checked"]
    _, out = run_cli(CASES["status_open"], capsys)
    assert json.loads(out)["status"] == "open"
    _, out = run_cli(CASES["cone_decompose"], capsys)
    data = json.loads(out)
    assert data["inside"] and data["reconstruction_matches"]
    assert data["reconstruction"] == data["class"]


def test_usage_errors(capsys):
    assert cli.main(["pair", "--n", "3", "--k", "1", "--r", "1", "H{1,4}", "H{1}"]) == 2
    assert "index 4" in capsys.readouterr().err
    assert cli.main(["intersect", "--n", "2", "--r", "1", "H{1} +"]) == 2
    assert "offset" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        cli.main(["status", "--n", "4"])
    assert info.value.code == 2


def test_verification_failure_exit(monkeypatch, capsys):
    monkeypatch.setitem(verify.CHECKS, "phi", lambda **kw: {"check": "phi", "passed": False})
    assert cli.main(["verify", "phi"]) == 1
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_out_file(tmp_path, capsys):
    target = tmp_path / "status.json"
    assert cli.main(["status", "--n", "3", "--k", "1", "--r", "6", "--out", str(target)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(target.read_text())["status"] == "fiber-generated"


def _help(args):
    res = subprocess.run([sys.executable, "-m", "cyclecone", *args, "--help"], capture_output=True, text=True)
    assert res.returncode == 0
    return res.stdout


def test_help_lists_every_command():
    top = _help([])
    for cmd in ("intersect", "pair", "cone", "fan", "linsys", "verify", "status"):
        assert cmd in top
    for group, actions in {"cone": ["members", "dual", "decompose"], "fan": ["build", "enumerate", "classes"],
                           "linsys": ["basis", "baselocus", "mult", "restrict"]}.items():
        text = _help([group])
        assert all(a in text for a in actions)
    text = _help(["verify"])
    for check in ("all", "pairing", "lemma-num", "lemma-bs", "lemma-tor", "prop-tor", "lemma-con",
                  "thm-linear", "prop-not", "prop-4-4", "phi"):
        assert check in text
    text = _help(["fan", "classes"])
    assert all(p in text for p in ("p1n", "x1", "x2", "x2fiber", "xtilde"))
