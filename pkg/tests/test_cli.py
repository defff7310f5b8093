"""Command-line interface: exit codes, output formats, determinism."""

import pytest

from ctcwb.cli import main

DEFS = """\
A = a.b.nil;
B = b.a.nil;
Par = a.nil || b.nil;
Mix = a.b.nil + b.a.nil;
Inf = a.(Inf || Inf);
"""


@pytest.fixture()
def deffile(tmp_path):
    f = tmp_path / "demo.ctc"
    f.write_text(DEFS)
    return str(f)


def test_parse_ok(deffile, capsys):
    assert main(["parse", deffile]) == 0
    assert "A" in capsys.readouterr().out


def test_parse_missing_file():
    assert main(["parse", "/nonexistent/x.ctc"]) == 2


def test_parse_syntax_error(tmp_path):
    f = tmp_path / "bad.ctc"
    f.write_text("A = a.;")
    assert main(["parse", str(f)]) == 2


def test_lts_text(deffile, capsys):
    assert main(["lts", deffile, "A"]) == 0
    out = capsys.readouterr().out
    assert "a" in out and "b" in out


def test_lts_dot(deffile, capsys):
    assert main(["lts", deffile, "Par", "--format", "dot"]) == 0
    assert "digraph" in capsys.readouterr().out


def test_lts_struct(deffile, capsys):
    assert main(["lts", deffile, "Par", "--format", "struct"]) == 0
    assert "states" in capsys.readouterr().out


def test_lts_state_bound(deffile):
    assert main(["lts", deffile, "Inf", "--max-states", "5"]) == 3


def test_lts_unknown_constant(deffile):
    assert main(["lts", deffile, "Nope"]) == 2


def test_equiv_equivalent(deffile, capsys):
    rc = main(["equiv", deffile, "A", "A", "--kind", "step",
               "--strength", "strong"])
    assert rc == 0
    assert "equivalent" in capsys.readouterr().out


def test_equiv_inequivalent_with_evidence(deffile, capsys):
    rc = main(["equiv", deffile, "Par", "Mix", "--kind", "pomset",
               "--strength", "strong"])
    assert rc == 1
    assert "inequivalent" in capsys.readouterr().out


def test_equiv_all_kinds_separate_milner_pair(deffile):
    for kind in ("step", "pomset", "hp", "hhp"):
        assert main(["equiv", deffile, "Par", "Mix", "--kind", kind,
                     "--strength", "strong"]) == 1


def test_equiv_bad_kind(deffile):
    with pytest.raises(SystemExit) as exc:
        main(["equiv", deffile, "A", "B", "--kind", "nope",
              "--strength", "strong"])
    assert exc.value.code == 2


def test_laws_runs_and_is_deterministic(capsys):
    rc = main(["laws", "--seed", "7", "--count", "3"])
    out1 = capsys.readouterr().out
    assert rc == 0
    assert main(["laws", "--seed", "7", "--count", "3"]) == 0
    assert capsys.readouterr().out == out1


def test_laws_bad_family():
    assert main(["laws", "--seed", "0", "--count", "1",
                 "--families", "nope"]) == 2


def test_abp_weak_step(capsys):
    rc = main(["abp", "--capacity", "1", "--kind", "step",
               "--strength", "weak"])
    assert rc == 0
    assert "capacity 1" in capsys.readouterr().out


def test_abp_strong_step_inequivalent():
    assert main(["abp", "--capacity", "1", "--kind", "step",
                 "--strength", "strong"]) == 1


def test_abp_bad_capacity():
    assert main(["abp", "--capacity", "0", "--kind", "step",
                 "--strength", "weak"]) == 2
