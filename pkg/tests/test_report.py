from __future__ import annotations

import json

import pytest

from orbitk.core.dynamics import analyze
from orbitk.core.errors import DomainError
from orbitk.core.loader import DEFAULT_SETTINGS, env_threads, load_settings, log_level, long_runs_enabled
from orbitk.core.models import LoopCatalog, PrimeAP, VerificationReport
from orbitk.core.report import (
    LOOP_FIELDS,
    ap_record,
    catalog_records,
    render_orbit,
    trajectory_document,
    verification_document,
    violation_records,
)
from orbitk.exporters.tables import emit, render, render_csv, render_json
from orbitk.rules.expected_violations import is_expected, missing_violations, unexpected_violations
from orbitk.utils.normalize import is_truthy, parse_ap, parse_int, parse_positive_int


@pytest.mark.parametrize("raw,expected", [("100_000", 100000), ("100,000", 100000), ("1e5", 100000), (" 42 ", 42), (7, 7), ("1.5", None), ("", None), ("abc", None), (None, None)])
def test_parse_int(raw, expected):
    assert parse_int(raw) == expected


def test_parse_positive_int():
    assert parse_positive_int("3", "--k") == 3
    with pytest.raises(DomainError):
        parse_positive_int("0", "--k")


def test_parse_ap():
    assert parse_ap("199, 210, 10") == PrimeAP(199, 210, 10)
    with pytest.raises(DomainError):
        parse_ap("199;210;10")


@pytest.mark.parametrize("raw,expected", [("1", True), ("YES", True), ("true", True), ("0", False), ("", False), (None, False)])
def test_is_truthy(raw, expected):
    assert is_truthy(raw) is expected


def test_load_settings_defaults(clean_env):
    assert load_settings() == DEFAULT_SETTINGS


def test_load_settings_override(clean_env):
    config = clean_env / "config"
    config.mkdir()
    (config / "orbitk.json").write_text(json.dumps({"s_cap": "5e3", "colour": "blue"}), encoding="utf-8")
    settings = load_settings()
    assert settings["s_cap"] == 5000
    assert "colour" not in settings
    (config / "orbitk.json").write_text(json.dumps({"max_steps": -1}), encoding="utf-8")
    with pytest.raises(DomainError):
        load_settings()


def test_environment(clean_env, monkeypatch):
    assert env_threads() == 1
    assert not long_runs_enabled()
    assert log_level() == "INFO"
    monkeypatch.setenv("ORBITK_THREADS", "4")
    monkeypatch.setenv("ORBITK_LONG", "yes")
    monkeypatch.setenv("ORBITK_LOG_LEVEL", "debug")
    assert env_threads() == 4
    assert long_runs_enabled()
    assert log_level() == "DEBUG"
    monkeypatch.setenv("ORBITK_THREADS", "0")
    with pytest.raises(DomainError):
        env_threads()


def test_catalog_records():
    record = analyze(3, 2)
    catalog = LoopCatalog(k=2, loops=[record.loop], seed_bound_used=4, seeds_processed=2, mode="safe")
    assert catalog_records(catalog) == [{"loop_id": 0, "period": 4, "min_element": 3, "elements": "3 5 7 9"}]
    assert render(catalog_records(catalog), LOOP_FIELDS, "csv") == "loop_id,period,min_element,elements\n0,4,3,3 5 7 9\n"


def test_render_json_projects_fields():
    records = [{"k": 1, "num_loops": 1, "extra": True}]
    assert json.loads(render(records, ("k", "num_loops"), "json")) == [{"k": 1, "num_loops": 1}]
    assert render_json({}) == "{}\n"


def test_render_csv_empty():
    assert render_csv([], ("period", "least_k")) == "period,least_k\n"


def test_emit(tmp_path, capsys):
    emit("a,b\n", None)
    assert capsys.readouterr().out == "a,b\n"
    target = tmp_path / "nested" / "out.csv"
    emit("a,b\n", str(target))
    assert target.read_bytes() == b"a,b\n"


def test_render_orbit_brackets_first_loop_pass():
    record = analyze(2, 12)
    terms = [2, 14, 7, 19, 31, 43, 55, 11, 23, 35, 7, 19]
    text = render_orbit(record, terms)
    assert text.splitlines()[0] == "S(2,12) = 2, 14, [7, 19, 31, 43, 55, 11, 23, 35], 7, 19, ..."
    assert "stopping time: 10" in text


def test_trajectory_document():
    record = analyze(8, 2)
    document = trajectory_document(record, [8, 2, 4])
    assert document["prefix"] == [8]
    assert document["loop"] == [2, 4]
    assert document["stopping_time"] == 3


def test_ap_record():
    record = analyze(5, 6)
    assert ap_record(PrimeAP(5, 6, 4), record) == {"first": 5, "difference": 6, "length": 4, "stopping_time": 10}


def test_violation_records_and_allowlist():
    report = VerificationReport(claim="even", grid="test", checked=2, violations=[{"k": 2, "p": 3}, {"k": 4, "p": 5}])
    assert violation_records(report) == [{"claim": "even", "instance": "k=2 p=3"}, {"claim": "even", "instance": "k=4 p=5"}]
    assert unexpected_violations(report) == [{"k": 4, "p": 5}]
    assert not report.passed
    assert is_expected("loop-bound", {"k": 3, "bound": "remark"})
    assert not is_expected("loop-bound", {"k": 4, "bound": "remark"})
    assert is_expected("prime-run", {"k": 2, "x0": 3, "run": 3})
    assert not is_expected("odd", {"k": 3, "p": 5})


def test_missing_violations():
    covered = VerificationReport(claim="even", grid="test", scope={"k_values": [2, 4], "p_limit": 100})
    assert missing_violations(covered) == [{"k": 2, "p": 3}]
    covered.violations.append({"k": 2, "p": 3})
    assert missing_violations(covered) == []
    without_k2 = VerificationReport(claim="even", grid="test", scope={"k_values": [4, 6], "p_limit": 100})
    assert missing_violations(without_k2) == []
    too_small = VerificationReport(claim="even", grid="test", scope={"k_values": [2], "p_limit": 2})
    assert missing_violations(too_small) == []
    assert missing_violations(VerificationReport(claim="odd", grid="test")) == []


def test_malformed_config_raises_domain_error(clean_env):
    config = clean_env / "config"
    config.mkdir()
    (config / "orbitk.json").write_text("[1, 2", encoding="utf-8")
    with pytest.raises(DomainError):
        load_settings()


def test_verification_document_lists_missing():
    report = VerificationReport(claim="even", grid="test", checked=3)
    document = verification_document(report, [], [{"k": 2, "p": 3}])
    assert document["missing"] == [{"k": 2, "p": 3}]
    assert verification_document(report, [])["missing"] == []
