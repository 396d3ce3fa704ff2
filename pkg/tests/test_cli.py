"""CLI and report tests: exit codes, determinism, fault location."""

from __future__ import annotations

import json

import pytest

from tlab.cli import main, resolve_level, subgroup_label
from tlab.groups import build_group, full_subgroup, subgroup_classes, trivial_subgroup
from tlab.harness import run_suite
from tlab.mackey import CheckRecord, CheckReport
from tlab.report import VerificationReport


def test_run_axioms_exit_zero(capsys):
    code = main(["run", "axioms", "--group", "C2", "--seed", "2", "--samples", "10"])
    out = capsys.readouterr().out
    assert code == 0
    assert "status=pass" in out


def test_run_all_json_report(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main([
        "run", "subfunctors", "--group", "C2", "--seed", "3",
        "--samples", "8", "--json", str(path),
    ])
    assert code == 0
    payload = json.loads(path.read_text())
    assert payload["schema"] == 1
    assert payload["suite"] == "subfunctors"
    assert payload["group"] == "C2"
    assert payload["status"] == "pass"
    assert payload["counts"]["fail"] == 0
    ids = [c["id"] for c in payload["checks"]]
    assert ids == sorted(ids)


def test_report_determinism(tmp_path):
    a = run_suite("ideals", "C2", seed=4, samples=12)
    b = run_suite("ideals", "C2", seed=4, samples=12)
    pa, pb = a.to_payload(), b.to_payload()
    for payload in (pa, pb):
        for c in payload["checks"]:
            c.pop("ms")
    assert json.dumps(pa, sort_keys=True) == json.dumps(pb, sort_keys=True)


def test_bad_group_spec_exit_two(capsys):
    assert main(["run", "axioms", "--group", "Q8"]) == 2
    assert main(["marks", "--group", "C2", "--level", "nope"]) == 2


def test_marks_output(capsys):
    assert main(["marks", "--group", "C2", "--level", "G"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["[G/e]\t2", "[G/G]\t1"]
    assert main(["marks", "--group", "S3", "--level", "G/e"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert out == ["[e/e]\t1"]
    assert main(["marks", "--group", "S3", "--level", "G"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert [line.split("\t")[1] for line in out] == ["6", "3", "2", "1"]


def test_group_info(capsys):
    assert main(["group", "info", "--group", "C2xC2"]) == 0
    out = capsys.readouterr().out
    assert "order\t4" in out
    assert out.count("level\t") == 5


def test_custom_table_group(capsys):
    spec = json.dumps({"order": 3, "table": [[0, 1, 2], [1, 2, 0], [2, 0, 1]]})
    assert main(["marks", "--group", spec, "--level", "G"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert [line.split("\t")[1] for line in out] == ["3", "1"]


def test_level_resolution():
    g = build_group("S3")
    assert resolve_level(g, "e").order == 1
    assert resolve_level(g, "G/C3").order == 3
    assert resolve_level(g, "class:1").order == 2
    labels = {subgroup_label(g, rep) for rep in
              subgroup_classes(full_subgroup(g)).representatives}
    assert labels == {"e", "C2", "C3", "G"}


def test_fault_injection_located(monkeypatch, capsys):
    # corrupt the comparison morphism: the suite must fail with a located id
    import tlab.harness as harness

    real = harness.rational_marks_morphism

    def corrupted(group):
        phi = real(group)
        original = phi.level_map

        def broken(sub, vec, _original=original):
            out = _original(sub, vec)
            return out + 1 if sub.order == group.order else out

        phi.level_map = broken
        return phi

    monkeypatch.setattr(harness, "rational_marks_morphism", corrupted)
    report = run_suite("fractions", "C4", seed=3, samples=6)
    assert report.status() == "fail"
    failing = [f"{sec}/{r.check_id}" for sec, r in report.records if r.status == "fail"]
    assert failing, "corruption must surface as located check ids"
    assert any("universal-factorization" in f for f in failing)


def test_lenient_status():
    report = VerificationReport("demo", "C2", 1, {})
    section = CheckReport("section")
    section.records.append(CheckRecord("x", "law", "pass"))
    section.records.append(CheckRecord("y", "law", "undecided"))
    report.extend(section)
    assert report.status(lenient=False) == "fail"
    assert report.status(lenient=True) == "warn"
    payload = report.to_payload(lenient=True)
    assert payload["status"] == "warn"
