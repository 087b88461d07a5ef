import json

import pytest

from albmod import cli, ray_chow
from albmod.errors import ParseError
from albmod.fields import GF
from albmod.parse import format_map, parse_divisor, parse_map, parse_place, parse_ratfun, parse_witt


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- grammar -----------------------------------------------------------------------------


def test_parse_ratfun(F2, F4):
    f = parse_ratfun("((t^2+t+1))/((t)*(t+1))", F2)
    assert f.format() == "(t^2+t+1)/(t^2+t)"
    assert parse_ratfun("g*t - g^2", F4) == parse_ratfun("2*t + 3", F4)
    assert parse_ratfun("t^-2", F2) == 1 / parse_ratfun("t^2", F2)
    assert parse_ratfun("-t", GF(3)) == parse_ratfun("2*t", GF(3))


def test_parse_divisor(F2):
    D = parse_divisor("2*(t) + 1*(t^2+t+1) + 3*inf", F2)
    assert D.degree == 7
    assert D.format() == "2*(t) + 1*(t^2+t+1) + 3*inf"
    assert parse_divisor("0", F2).is_zero()
    assert parse_divisor("(t) - inf", F2).degree == 0


def test_parse_witt_and_place(F3):
    w = parse_witt("(t^-1; 0; 2*t)", F3)
    assert w.r == 3
    assert parse_place("(t^2+1)", F3).degree == 2


@pytest.mark.parametrize(
    "text,pos",
    [("t +* 1", 3), ("1*(t", 4), ("t/0", 1), ("3*t", 0), ("(t) )", 4)],
)
def test_parse_errors_carry_positions(F2, text, pos):
    with pytest.raises(ParseError) as info:
        parse_ratfun(text, F2)
    assert info.value.pos == pos
    assert "^" in info.value.annotated()


def test_place_must_be_irreducible(F2):
    with pytest.raises(ParseError) as info:
        parse_divisor("2*(t^2+1)", F2)
    assert info.value.pos == 2


def test_map_roundtrip():
    text = "p=2; m=1; r=2; toric=[t]; unip=[(t^-1;0),(1/(t+1);t)]"
    phi = parse_map(text)
    assert phi.r == 2 and len(phi.unip) == 2 and len(phi.toric) == 1
    assert parse_map(format_map(phi)) == phi


@pytest.mark.parametrize("text", ["p=2; q=1", "p=2; p=3; unip=[(t)]", "m=1; unip=[(t)]", "p=4; unip=[(t)]", "p=2; r=2; unip=[(t)]", "p=2; unip=[(t)"])
def test_bad_map_files(text):
    with pytest.raises(ParseError):
        parse_map(text)


# -- subcommands and exit codes ------------------------------------------------------------


def test_raygroup(capsys):
    code, out, _ = run(capsys, "raygroup", "--p", "2", "--m", "1", "--D", "2*inf")
    data = json.loads(out)
    assert code == 0
    assert data["invariant_factors"] == [2] and data["order"] == 2 and data["schema"] == 1


def test_nty(capsys):
    code, out, _ = run(capsys, "nty", "--p", "2", "--m", "1", "--r", "1", "--place", "(t)", "--witt", "(t^-3)")
    assert code == 0 and json.loads(out)["nty"] == 3


def test_nty_length_mismatch(capsys):
    code, _, err = run(capsys, "nty", "--r", "2", "--place", "(t)", "--witt", "(t^-3)")
    assert code == 2 and "length" in err


def test_modulus(capsys, tmp_path):
    path = tmp_path / "map.txt"
    path.write_text("p=2; unip=[(t^-3)]\n")
    code, out, _ = run(capsys, "modulus", "--map", str(path))
    assert code == 0 and json.loads(out)["modulus"] == "4*(t)"
    code, out, _ = run(capsys, "modulus", "--map-text", "p=3; toric=[t]")
    assert json.loads(out)["modulus"] == "1*(t) + 1*inf"


def test_chow_and_cft(capsys):
    code, out, _ = run(capsys, "chow", "--D", "3*(t)")
    assert code == 0 and json.loads(out)["invariant_factors"] == [4]
    code, out, _ = run(capsys, "cft", "covers", "--D", "2*inf")
    assert code == 0 and json.loads(out)["ok"]
    code, out, _ = run(capsys, "cft", "reciprocity", "--D", "inf", "--f", "t")
    assert code == 0 and json.loads(out)["violation"]["sum"] == 1
    code, _, _ = run(capsys, "cft", "reciprocity", "--D", "inf")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify", "universality", "--p", "3", "--m", "1", "--D", "2*(t)+1*inf", "--bound", "3"],
        ["verify", "surjection", "--E", "3*(t)", "--D", "2*(t)"],
        ["verify", "sections", "--D", "4*inf", "--r", "2"],
        ["verify", "covers", "--p", "3", "--D", "2*(t)+inf"],
        ["verify", "reciprocity", "--D", "2*inf", "--f", "t"],
        ["verify", "lemma", "--map-text", "p=2; unip=[(t^-1)]", "--D", "2*(t)"],
    ],
)
def test_verify_suites_pass(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0, out
    assert json.loads(out)["ok"]


def test_parse_error_exit(capsys):
    code, out, err = run(capsys, "raygroup", "--D", "2*(t+")
    assert code == 2 and out == ""
    assert "position 5" in err and "^" in err


def test_budget_exit(capsys):
    code, out, _ = run(capsys, "raygroup", "--p", "3", "--D", "20*inf")
    assert code == 3 and json.loads(out)["error"] == "BudgetError"


def test_domain_error_exit(capsys):
    code, _, err = run(capsys, "raygroup", "--p", "4", "--D", "inf")
    assert code == 2 and "invalid input" in err


def test_failure_writes_replayable_counterexample(capsys, tmp_path, monkeypatch):
    def broken(D, bound=None):
        return {"D": D.format(), "ok": False}

    monkeypatch.setattr(ray_chow, "universality_check", broken)
    art = tmp_path / "cx.json"
    code, out, _ = run(capsys, "verify", "universality", "--D", "2*inf", "--counterexample", str(art))
    assert code == 1
    saved = json.loads(art.read_text())
    assert saved["suite"] == "universality" and saved["params"]["D"] == "2*inf"
    code, _, _ = run(capsys, "replay", str(art), "--counterexample", str(tmp_path / "again.json"))
    assert code == 1
    monkeypatch.undo()
    code, out, _ = run(capsys, "replay", str(art))
    assert code == 0 and json.loads(out)["replayed"] == str(art)


def test_output_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    run(capsys, "cft", "reciprocity", "--p", "3", "--D", "2*inf", "--f", "t", "--seed", "4", "--out", str(a))
    run(capsys, "cft", "reciprocity", "--p", "3", "--D", "2*inf", "--f", "t", "--seed", "4", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p": 3, "D": "2*(t)+inf"}))
    code, out, _ = run(capsys, "raygroup", "--config", str(cfg), "--D", "2*(t)+inf")
    assert code == 0 and json.loads(out)["invariant_factors"] == [6]
