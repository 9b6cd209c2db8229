"""CLI subcommands, report formats, determinism, exit codes."""

import json

import pytest

from fdegcheck.cli import (
    RunConfig,
    build_parser,
    conductor_assignment_for,
    explain,
    main,
    render_reports,
    run,
)
from fdegcheck.catalog import get_entry
from fdegcheck.errors import InvalidInputError


def test_catalog_list(capsys):
    assert main(["catalog", "list"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) >= 6 and "U4" in out


def test_catalog_show(capsys):
    assert main(["catalog", "show", "SU3"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["name"] == "SU3"
    assert doc["inertia_perm"] == [0, 1]
    assert doc["frobenius_perm"] == [1, 0]


def test_verify_lemma2_cli(capsys):
    code = main(["verify", "lemma2", "--group", "SL2", "--conductor", "alpha=2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "lemma2" in out and "'6': '1'" in out  # both sides q^3 = v^6


def test_verify_concavity_cli(capsys):
    code = main(["verify", "concavity", "--group", "U4", "--samples", "50", "--seed", "7"])
    assert code == 0
    assert "concavity" in capsys.readouterr().out


def test_unknown_group_is_error(capsys):
    assert main(["verify", "lemma2", "--group", "Nope"]) == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_check_is_error(capsys):
    assert main(["verify", "nonsense"]) == 2


def test_bad_conductor_label(capsys):
    assert main(["verify", "lemma2", "--group", "SL2", "--conductor", "beta=1"]) == 2


def test_explain_cli(capsys):
    code = main(["explain", "--group", "SL2", "--conductor", "alpha=2"])
    out = capsys.readouterr().out
    assert code == 0
    assert "match: True" in out
    assert "f(1+c)+f*val(D) = 3" in out


def test_explain_depth_zero(capsys):
    main(["explain", "--group", "A2"])
    out = capsys.readouterr().out
    assert "a(t^vee) = 0" in out and "match: True" in out


def test_conductor_closure():
    entry = get_entry("U4")
    c = conductor_assignment_for(entry, {"alpha": 1})
    # unspecified classes close by min over decompositions of max
    assert c.as_dict() == {"alpha": 1, "beta": 0, "alpha+beta": 1, "2alpha+beta": 1}


def test_run_deterministic():
    config = RunConfig(checks=("lemma2", "concavity"), seed=33, samples=5, groups=("SU3", "B2"))
    code1, reports1 = run(config)
    code2, reports2 = run(config)
    assert code1 == code2 == 0
    assert render_reports(reports1, "json") == render_reports(reports2, "json")
    assert render_reports(reports1, "text") == render_reports(reports2, "text")


def test_report_json_schema():
    config = RunConfig(checks=("lemma2",), seed=1, samples=2, groups=("SL2",))
    _, reports = run(config)
    docs = json.loads(render_reports(reports, "json"))
    for doc in docs:
        assert set(doc) >= {"instance", "check", "lhs", "rhs", "pass"}


def test_out_file(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = main(
        ["verify", "lemma2", "--group", "SL2", "--seed", "2", "--samples", "3",
         "--format", "json", "--out", str(out)]
    )
    assert code == 0
    docs = json.loads(out.read_text())
    assert docs and all(d["pass"] for d in docs)


def test_full_default_suite():
    config = RunConfig(seed=5, samples=3)
    code, reports = run(config)
    assert code == 0
    assert all(r.passed for r in reports)
    checks_seen = {r.check for r in reports}
    assert {"concavity", "gallery", "lemma2", "lemma1", "hii", "conductor-inductivity"} <= checks_seen


def test_run_config_validation():
    with pytest.raises(InvalidInputError):
        RunConfig(samples=0)
    with pytest.raises(InvalidInputError):
        RunConfig(checks=("bogus",))
