import json

import pytest

from rmlab.config import settings
from rmlab.errors import ParameterError
from rmlab.main import main
from rmlab.services.acceptance import CHECKS, run_acceptance, run_criterion, suite_path


@pytest.fixture
def fixtures_dir(tmp_path, monkeypatch):
    monkeypatch.setattr(settings, "FIXTURES_DIR", str(tmp_path))
    return tmp_path


def write_suite(directory, name, criteria):
    (directory / f"{name}.json").write_text(json.dumps({"suite": name, "criteria": criteria}), encoding="utf-8")


def test_packaged_suites_use_known_checks():
    for name in ("quick", "full"):
        data = json.loads(suite_path(name).read_text(encoding="utf-8"))
        assert data["suite"] == name
        assert {c["check"] for c in data["criteria"]} <= set(CHECKS)


def test_full_suite_covers_every_criterion():
    data = json.loads(suite_path("full").read_text(encoding="utf-8"))
    assert [c["id"] for c in data["criteria"]] == [str(i) for i in range(1, 13)]


def test_unknown_suite():
    with pytest.raises(ParameterError, match="available"):
        suite_path("nope")


def test_unknown_check_fails_without_raising(config):
    result = run_criterion({"id": "x", "title": "bogus", "check": "nope"}, config)
    assert not result.passed
    assert "unknown check" in result.detail


def test_small_suite(fixtures_dir, config):
    write_suite(fixtures_dir, "small", [
        {"id": "2", "title": "weights", "check": "weight_formula",
         "params": {"cases": [{"q": 2, "n": 3, "k": 2, "exact": [1, 0, 49, 14]}]}},
        {"id": "8", "title": "sheekey", "check": "sheekey",
         "params": {"cases": [{"q": 2, "n": 4, "f": "x^q^2", "expected": False}]}},
    ])
    report = run_acceptance("small", config)
    assert report.suite == "small"
    assert report.passed
    assert [r.id for r in report.results] == ["2", "8"]


def test_a_wrong_expectation_fails(fixtures_dir, config):
    write_suite(fixtures_dir, "wrong", [
        {"id": "7", "title": "max rank", "check": "max_scattered_rank",
         "params": {"cases": [{"r": 2, "n": 2, "q": 2, "expected": 3}]}},
    ])
    report = run_acceptance("wrong", config)
    assert not report.passed


def test_accept_command_exit_codes(fixtures_dir, capsys):
    write_suite(fixtures_dir, "ok", [
        {"id": "8", "title": "sheekey", "check": "sheekey",
         "params": {"cases": [{"q": 2, "n": 5, "f": "x^q", "expected": True}]}},
    ])
    write_suite(fixtures_dir, "bad", [{"id": "1", "title": "bogus", "check": "nope"}])
    assert main(["accept", "ok"]) == 0
    assert "ok: 1/1 criteria passed" in capsys.readouterr().out
    assert main(["accept", "bad"]) == 1
    assert "[FAIL]" in capsys.readouterr().out


@pytest.mark.slow
def test_quick_suite_passes(config):
    report = run_acceptance("quick", config)
    failed = [f"{r.id}: {r.detail}" for r in report.results if not r.passed]
    assert not failed


def _criterion(suite: str, ident: str):
    data = json.loads(suite_path(suite).read_text(encoding="utf-8"))
    return next(c for c in data["criteria"] if c["id"] == ident)


def test_full_suite_transports_idealisers_for_n_up_to_six():
    params = _criterion("full", "5")["params"]["gabidulin"]
    assert params["n"] == [4, 5, 6]


def test_idealiser_transport_at_n5(config):
    params = {
        "gabidulin": {"q": [2], "n": [5], "k": [2], "all_s": True},
        "twisted": {"q": 3, "n": 4, "h": [1], "norm": 2},
        "trombetti_zhou": {"q": 3, "n": 4},
    }
    passed, detail = CHECKS["idealiser_transport"](params, config)
    assert passed, detail
    assert detail == "6 codes"


def test_c3_is_built_and_compared_with_c_f(config):
    case = next(c for c in _criterion("full", "10")["params"]["cases"] if c["name"] == "C3")
    assert case["label"] == "(6,6,5;5)"
    passed, detail = CHECKS["sporadic"]({"cases": [case]}, config)
    assert passed, detail
    wrong = dict(case, label="(6,6,5;4)")
    passed, detail = CHECKS["sporadic"]({"cases": [wrong]}, config)
    assert not passed
    assert detail == "C3 q=5: (6,6,5;5)"
