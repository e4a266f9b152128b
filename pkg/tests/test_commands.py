# tests/test_commands.py
import json
import logging
from pathlib import Path

import pytest
from click.testing import CliRunner

from cli.commands import cli, run_subcommand
from core.config import RunConfig
from core.errors import ParseError
from oracle.consistency import SuiteReport

FIXTURES = Path(__file__).parent / "fixtures"
UNIVERSE = str(FIXTURES / "universe.csv")
LOSSES = str(FIXTURES / "losses.json")
SYMMETRIC = str(FIXTURES / "losses_symmetric.json")


@pytest.fixture(autouse=True)
def drop_cli_log_handlers():
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if getattr(h, "_threeway", False)]:
        root.removeHandler(handler)


@pytest.fixture
def runner():
    return CliRunner()


def _run(runner, *args):
    return runner.invoke(cli, list(args))


def _json(result):
    assert result.exit_code == 0, result.output
    return json.loads(result.output)


def _assert_matches(expected, actual, where="report"):
    # same keys and lengths everywhere; floats to 1e-12
    if isinstance(expected, dict):
        assert isinstance(actual, dict) and set(actual) == set(expected), where
        for key, value in expected.items():
            _assert_matches(value, actual[key], f"{where}.{key}")
    elif isinstance(expected, list):
        assert isinstance(actual, list) and len(actual) == len(expected), where
        for i, (e, a) in enumerate(zip(expected, actual)):
            _assert_matches(e, a, f"{where}[{i}]")
    elif isinstance(expected, float):
        assert actual == pytest.approx(expected, abs=1e-12), where
    else:
        assert actual == expected, where


def test_decide_iv_matches_golden_report(runner):
    # arrange
    golden = json.loads((FIXTURES / "golden_decide_iv.json").read_text(encoding="utf-8"))

    # act
    report = _json(_run(runner, "decide-iv", "--dataset", UNIVERSE, "--losses", LOSSES))

    # assert
    _assert_matches(golden, report)


def test_decide_iv_is_byte_identical_across_runs(runner):
    args = ("decide-iv", "--dataset", UNIVERSE, "--losses", LOSSES)
    first, second = _run(runner, *args), _run(runner, *args)
    assert first.exit_code == 0
    assert first.output == second.output


def test_decide_iv_records_risks_and_cutpoints(runner):
    report = _json(_run(runner, "decide-iv", "--dataset", UNIVERSE, "--losses", LOSSES))
    x2 = report["objects"][1]
    assert x2["risks"]["r"] == pytest.approx([3.5, 4.2], abs=1e-12)
    assert report["summary"]["total_risk"] == pytest.approx([1.5, 2.1], abs=1e-12)
    assert report["summary"]["regime_cutpoints"]["high"]["er"]["certain_below"] == [0.5, 1.0]


def test_decide_agrees_with_decide_iv_on_fixture(runner):
    scalar = _json(_run(runner, "decide", "--dataset", UNIVERSE, "--losses", LOSSES))
    interval = _json(_run(runner, "decide-iv", "--dataset", UNIVERSE, "--losses", LOSSES))
    assert [o["value"] for o in scalar["objects"]] == [0.0, 1.0, 0.5, 0.5]
    assert [o["value"] for o in scalar["objects"]] == [o["value"] for o in interval["objects"]]
    assert scalar["summary"]["thresholds"]["alpha"] == pytest.approx(0.65, abs=1e-12)


def test_decide_equals_decide_iv_on_degenerate_input(runner, tmp_path):
    # arrange
    dataset = tmp_path / "points.csv"
    dataset.write_text("id,lo,hi\na,0.1,0.1\nb,0.3,0.3\nc,0.5,0.5\nd,0.62,0.62\ne,0.9,0.9\nf,0.75,0.75\n", encoding="utf-8")

    # act
    scalar = _json(_run(runner, "decide", "--dataset", str(dataset), "--losses", SYMMETRIC))
    interval = _json(_run(runner, "decide-iv", "--dataset", str(dataset), "--losses", SYMMETRIC))

    # assert
    values = [o["value"] for o in scalar["objects"]]
    assert values == [0.0, 0.5, 0.5, 0.5, 1.0, 1.0]
    assert values == [o["value"] for o in interval["objects"]]


def test_thresholds_of_fixture_profile(runner):
    report = _json(_run(runner, "thresholds", "--losses", LOSSES))
    thresholds = report["summary"]["thresholds"]
    assert report["summary"]["reduced_losses"] == {"lambda_e": 1.5, "lambda_r": 5.5, "lambda_sd": 3.5, "lambda_su": 3.5}
    assert thresholds["alpha"] == pytest.approx(0.65, abs=1e-12)
    assert thresholds["beta"] == pytest.approx(3.5 / 18, abs=1e-12)


def test_thresholds_spell_infinite_gammas(runner):
    thresholds = _json(_run(runner, "thresholds", "--losses", SYMMETRIC))["summary"]["thresholds"]
    assert (thresholds["alpha"], thresholds["beta"]) == (0.75, 0.25)
    assert (thresholds["gamma_minus"], thresholds["gamma_plus"]) == ("-inf", "inf")


def test_condition_violation_exits_with_validation_code(runner, tmp_path):
    losses = tmp_path / "bad.json"
    losses.write_text('{"lambda_e": [1, 2], "lambda_r": [5, 6], "lambda_sd": [3, 4], "lambda_su": [5, 6]}', encoding="utf-8")
    result = _run(runner, "thresholds", "--losses", str(losses))
    assert result.exit_code == 1
    assert "c3" in result.output


def test_reduce_lists_m_theta(runner):
    report = _json(_run(runner, "reduce", "--dataset", UNIVERSE, "--theta", "0.5"))
    assert [o["m_theta"] for o in report["objects"]] == pytest.approx([0.15, 0.7, 0.4, 0.45], abs=1e-12)
    assert report["objects"][3]["grade"] == [0.1, 0.8]
    assert report["config"]["theta"] == 0.5


def test_shadow_optimises_thresholds(runner):
    report = _json(_run(runner, "shadow", "--dataset", UNIVERSE))
    thresholds = report["summary"]["thresholds"]
    assert thresholds["source"] == "optimized"
    assert thresholds["beta"] == pytest.approx(1.0 - thresholds["alpha"], abs=1e-15)
    assert report["summary"]["region_errors"]["shadow"] == report["summary"]["region_cardinalities"]["shadow"]


def test_approx_with_lone_alpha(runner):
    report = _json(_run(runner, "approx", "--dataset", UNIVERSE, "--alpha", "0.8"))
    thresholds = report["summary"]["thresholds"]
    assert thresholds["source"] == "given"
    assert thresholds["beta"] == pytest.approx(0.2, abs=1e-12)
    assert [o["value"] for o in report["objects"]] == [0.0, 0.5, 0.5, 0.5]


def test_approx_defaults_to_error_optimal_pair(runner):
    report = _json(_run(runner, "approx", "--dataset", UNIVERSE))
    assert report["summary"]["thresholds"] == {"alpha": 0.75, "beta": 0.25, "source": "error_optimal"}


def test_inverted_grade_exits_with_row_number(runner):
    result = _run(runner, "decide-iv", "--dataset", str(FIXTURES / "universe_inverted.csv"), "--losses", LOSSES)
    assert result.exit_code == 1
    assert "Error:" in result.output
    assert "row 4" in result.output


def test_missing_losses_exits_with_validation_code(runner):
    result = _run(runner, "decide", "--dataset", UNIVERSE)
    assert result.exit_code == 1
    assert "--losses" in result.output


def test_csv_format(runner):
    result = _run(runner, "decide-iv", "--dataset", UNIVERSE, "--losses", LOSSES, "--format", "csv")
    assert result.exit_code == 0
    lines = result.output.splitlines()
    assert lines[0] == "# command=decide-iv"
    header = next(line for line in lines if not line.startswith("#")).split(",")
    assert "matrix_er" in header
    assert "risks_e_lo" in header


def test_check_passes_at_small_scale(runner):
    report = _json(_run(runner, "check", "--cases", "50", "--grid", "11", "--seed", "3"))
    assert report["summary"]["ok"] is True
    assert report["summary"]["violations"] == 0
    assert {o["suite"] for o in report["objects"]} == {"possibility", "thresholds", "optimizer"}


def test_version(runner):
    result = _run(runner, "--version")
    assert result.exit_code == 0
    assert "1.0.0" in result.output


def test_run_subcommand_rejects_unknown_name():
    with pytest.raises(ParseError):
        run_subcommand("explode", RunConfig(), {})


def test_check_exits_with_oracle_code_on_violation(runner, monkeypatch):
    # arrange
    def failing_suite(seed, profiles, grid_points):
        return SuiteReport(
            "thresholds",
            checks={"closed_form_vs_brute_force": 1},
            violations=[{"check": "closed_form_vs_brute_force", "m": 0.5, "decision": 1.0}],
        )

    monkeypatch.setattr("cli.commands.threshold_oracle_suite", failing_suite)

    # act
    result = _run(runner, "check", "--cases", "20", "--grid", "11", "--seed", "3")

    # assert
    assert result.exit_code == 2
    report = json.loads(result.output)
    assert report["summary"]["ok"] is False
    assert report["summary"]["violations"] == 1
    assert report["summary"]["details"][0]["m"] == 0.5
    failing = [o for o in report["objects"] if o["violations"]]
    assert failing == [{"suite": "thresholds", "check": "closed_form_vs_brute_force", "count": 1, "violations": 1}]


def test_extra_csv_field_exits_with_row_number(runner, tmp_path):
    dataset = tmp_path / "wide.csv"
    dataset.write_text("id,lo,hi\nx1,0.1,0.2,0.3\n", encoding="utf-8")
    result = _run(runner, "reduce", "--dataset", str(dataset))
    assert result.exit_code == 1
    assert "row 1" in result.output


def test_huge_losses_give_finite_thresholds(runner, tmp_path):
    losses = tmp_path / "huge.json"
    losses.write_text('{"lambda_e": 1e308, "lambda_r": 1e308, "lambda_sd": 1e308, "lambda_su": 1e308}', encoding="utf-8")
    thresholds = _json(_run(runner, "thresholds", "--losses", str(losses)))["summary"]["thresholds"]
    assert (thresholds["alpha"], thresholds["beta"], thresholds["gamma"]) == (0.75, 0.25, 0.5)


def test_negative_seed_exits_with_validation_code(runner):
    result = _run(runner, "check", "--seed=-1", "--cases", "10")
    assert result.exit_code == 1
    assert "seed" in result.output
