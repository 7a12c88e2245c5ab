"""Command-line interface: subcommands, exit codes, output formats."""

import json
from pathlib import Path

import pytest

from coalgcert.cli import main

MODELS = Path(__file__).parent / "models"
TS1 = str(MODELS / "ts1.model")
MC1 = str(MODELS / "mc1.model")
PR1 = str(MODELS / "pr1.model")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", TS1, "--verify")
    assert code == 0
    assert "x1" in out and "blocks" in out.lower()


def test_certify_json(capsys, tmp_path):
    code, out, _ = run(capsys, "certify", TS1, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["functor"] == "P" and len(doc["blocks"]) == 3
    assert set(doc["certificates"]) == {"0", "1", "2"}


def test_certify_out_file(capsys, tmp_path):
    dest = tmp_path / "certs.txt"
    code, _, _ = run(capsys, "certify", TS1, "--out", str(dest))
    assert code == 0 and dest.exists()
    assert "x1" in dest.read_text()


def test_distinguish(capsys):
    code, out, _ = run(capsys, "distinguish", TS1, "x", "y")
    assert code == 0
    assert "<{1}>(<{}>, true)" in out


def test_distinguish_equivalent(capsys):
    code, out, _ = run(capsys, "distinguish", TS1, "x1", "y")
    assert code == 0
    assert "equivalent" in out.lower()


def test_distinguish_logic(capsys):
    code, out, _ = run(capsys, "distinguish", TS1, "x", "y", "--logic", "hm")
    assert code == 0
    assert "<>" in out


def test_distinguish_unknown_state(capsys):
    code, _, err = run(capsys, "distinguish", TS1, "nope", "y")
    assert code == 2 and "nope" in err


def test_minimize(capsys):
    code, out, _ = run(capsys, "minimize", MC1)
    assert code == 0
    lines = [l for l in out.splitlines() if "->" in l]
    assert len(lines) == 3  # quotient has three states


def test_check_golden(capsys):
    code, out, _ = run(capsys, "check", TS1, "[]<>true")
    assert code == 0
    assert out.split() == ["x"]


def test_check_generic_syntax(capsys):
    code, out, _ = run(capsys, "check", TS1, "<{1}>(<{}>, true)")
    assert code == 0
    assert out.split() == ["x"]


def test_check_bad_formula(capsys):
    code, _, err = run(capsys, "check", TS1, "<oops")
    assert code == 2 and err


def test_translate_weighted(capsys):
    code, out, _ = run(capsys, "translate", MC1, "--logic", "weighted",
                       "--mode", "cancellative")
    assert code == 0
    assert "~" not in out and "<1/2>" in out


def test_translate_prob(capsys):
    code, out, _ = run(capsys, "translate", PR1, "--logic", "prob")
    assert code == 0
    assert "_{1/2}" in out


def test_translate_incompatible_logic(capsys):
    code, _, err = run(capsys, "translate", TS1, "--logic", "weighted")
    assert code == 4 and err


def test_translate_cancellative_needs_two_sided(capsys):
    code, _, err = run(capsys, "translate", MC1, "--logic", "weighted",
                       "--mode", "cancellative")
    assert code == 0
    code, _, err = run(capsys, "certify", TS1, "--mode", "cancellative")
    assert code == 4 and err


def test_stats_json(capsys):
    code, out, _ = run(capsys, "stats", TS1, "--json")
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 4 and doc["blocks"] == 3 and doc["iterations"] >= 1


def test_gen_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.model", tmp_path / "b.model"
    for dest in (a, b):
        code, _, _ = run(capsys, "gen", "--functor", "P", "--n", "12",
                         "--seed", "5", "--out", str(dest))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    # generated models feed straight back into certify --verify
    code, _, _ = run(capsys, "certify", str(a), "--verify")
    assert code == 0


def test_composite_model(capsys, tmp_path):
    model = tmp_path / "comp.model"
    model.write_text(
        "functor: P . (C{a,b} x X)\nstates: s, t, u\n"
        "s -> {(a, s), (b, t)}\nt -> {}\nu -> {(a, u), (b, t)}\n")
    code, out, _ = run(capsys, "certify", str(model), "--verify")
    assert code == 0
    assert "aux" not in out  # helper states stay hidden
    code, out, _ = run(capsys, "distinguish", str(model), "s", "u")
    assert code == 0 and "equivalent" in out.lower()
    code, _, err = run(capsys, "minimize", str(model))
    assert code == 4


def test_missing_model_file(capsys):
    code, _, err = run(capsys, "certify", "/nonexistent.model")
    assert code == 2 and err
