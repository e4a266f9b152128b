"""
Command-line interface.

Usage:
    threeway reduce --dataset grades.csv --theta 0.5
    threeway shadow --dataset grades.csv                 # optimised alpha, beta = 1 - alpha
    threeway approx --dataset grades.csv --alpha 0.8 --beta 0.2
    threeway thresholds --losses losses.json
    threeway decide --dataset grades.csv --losses losses.json
    threeway decide-iv --dataset grades.csv --losses losses.json --format csv
    threeway check --seed 42 --cases 10000
"""
import logging
import sys
from typing import Any, Callable, Dict, Mapping, Optional

import click

from cli.ingest import ingest_dataset, ingest_losses
from cli.report import DecisionReport, interval_list
from core.config import RunConfig, configure_logging
from core.errors import MissingInput, ParseError, ThreeWayError
from decisions.loss_thresholds import (
    Action,
    decide,
    reduce_losses,
    risks,
    shadow_action,
    thresholds_from_losses,
    total_loss,
)
from decisions.possibility import Situation, allowed_outcomes, assess, regime_cutpoints, total_risk_interval
from fuzzy.fuzzy_sets import IVFuzzySet, reduce
from fuzzy.shadowed_sets import (
    ThresholdPair,
    error_optimal_thresholds,
    objective_v,
    optimize_thresholds_balanced,
    per_object_error,
    region_cardinalities,
    region_errors,
    shadow_assign,
    shadow_partition,
    total_error,
)
from oracle.consistency import (
    SuiteReport,
    optimizer_oracle_suite,
    possibility_consistency_suite,
    threshold_oracle_suite,
)

logger = logging.getLogger(__name__)

ORACLE_EXIT_CODE = 2
VALIDATION_EXIT_CODE = 1


def _dataset(inputs: Mapping[str, Any]) -> IVFuzzySet:
    if inputs.get("dataset") is None:
        raise MissingInput("this subcommand needs --dataset")
    return ingest_dataset(inputs["dataset"])


def _losses(inputs: Mapping[str, Any]):
    if inputs.get("losses") is None:
        raise MissingInput("this subcommand needs --losses")
    return ingest_losses(inputs["losses"])


def _given_pair(inputs: Mapping[str, Any]) -> Optional[ThresholdPair]:
    """Explicit thresholds; a lone alpha or beta implies the other as its complement."""
    alpha, beta = inputs.get("alpha"), inputs.get("beta")
    if alpha is None and beta is None:
        return None
    if beta is None:
        beta = 1.0 - alpha
    elif alpha is None:
        alpha = 1.0 - beta
    return ThresholdPair(alpha, beta)


def _config_echo(config: RunConfig, inputs: Mapping[str, Any]) -> dict:
    echo = config.as_dict()
    for key in ("alpha", "beta"):
        if inputs.get(key) is not None:
            echo[key] = inputs[key]
    return echo


def _grade_records(dataset: IVFuzzySet, theta: float) -> list:
    reduced = reduce(dataset, theta)
    return [
        {"id": object_id, "grade": interval_list(grade), "m_theta": m}
        for (object_id, grade), m in zip(dataset, reduced.grades)
    ]


def _threshold_summary(thresholds: ThresholdPair, source: str) -> dict:
    return {"alpha": thresholds.alpha, "beta": thresholds.beta, "source": source}


def _run_reduce(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    dataset = _dataset(inputs)
    return DecisionReport(
        "reduce", _config_echo(config, inputs), _grade_records(dataset, config.theta), {"objects": len(dataset)}
    )


def _run_shadow(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    dataset = _dataset(inputs)
    scalar = reduce(dataset, config.theta)
    thresholds, source = _given_pair(inputs), "given"
    if thresholds is None:
        alpha, _ = optimize_thresholds_balanced(scalar)
        thresholds, source = ThresholdPair(alpha, 1.0 - alpha), "optimized"

    objects = _grade_records(dataset, config.theta)
    for record in objects:
        value = shadow_assign(record["m_theta"], thresholds)
        record.update({
            "shadow": value.value,
            "region": value.region,
            "error": per_object_error(record["m_theta"], thresholds),
        })
    errors = region_errors(scalar, thresholds)
    summary = {
        "thresholds": _threshold_summary(thresholds, source),
        "objective_v": objective_v(scalar, thresholds),
        "region_errors": {
            "elevated": errors.elevated,
            "reduced": errors.reduced,
            "shadow": errors.shadow,
            "shadow_half": errors.shadow_half,
        },
        "region_cardinalities": region_cardinalities(scalar, thresholds),
        "partition": shadow_partition(scalar, thresholds),
        "total_error": total_error(scalar, thresholds),
    }
    return DecisionReport("shadow", _config_echo(config, inputs), objects, summary)


def _run_approx(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    dataset = _dataset(inputs)
    scalar = reduce(dataset, config.theta)
    thresholds, source = _given_pair(inputs), "given"
    if thresholds is None:
        thresholds, source = error_optimal_thresholds(), "error_optimal"

    objects = _grade_records(dataset, config.theta)
    for record in objects:
        value = shadow_assign(record["m_theta"], thresholds)
        record.update({
            "value": value.codebook,
            "region": value.region,
            "error": per_object_error(record["m_theta"], thresholds),
        })
    errors = region_errors(scalar, thresholds)
    summary = {
        "thresholds": _threshold_summary(thresholds, source),
        "total_error": total_error(scalar, thresholds),
        "shadow_half_error": errors.shadow_half,
        "region_cardinalities": region_cardinalities(scalar, thresholds),
    }
    return DecisionReport("approx", _config_echo(config, inputs), objects, summary)


def _run_thresholds(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    losses = _losses(inputs)
    reduced = reduce_losses(losses, config.theta)
    summary = {
        "losses": losses.as_dict(),
        "reduced_losses": reduced.as_dict(),
        "thresholds": thresholds_from_losses(reduced).as_dict(),
    }
    return DecisionReport("thresholds", _config_echo(config, inputs), [], summary)


def _cardinalities(objects: list) -> Dict[str, int]:
    counts = {"elevate": 0, "reduce": 0, "shadow": 0}
    for record in objects:
        counts[record["region"]] += 1
    return counts


def _run_decide(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    dataset = _dataset(inputs)
    losses = _losses(inputs)
    reduced = reduce_losses(losses, config.theta)
    derived = thresholds_from_losses(reduced)
    scalar = reduce(dataset, config.theta)

    objects = _grade_records(dataset, config.theta)
    for record in objects:
        m = record["m_theta"]
        value = decide(m, derived)
        action = {1.0: Action.ELEVATE, 0.0: Action.REDUCE}.get(value) or shadow_action(m)
        record.update({
            "value": value,
            "region": action.region,
            "action": action.value,
            "risks": {a.value: r for a, r in risks(m, reduced).items()},
            "error": abs(m - value),
        })
    summary = {
        "losses": losses.as_dict(),
        "reduced_losses": reduced.as_dict(),
        "thresholds": derived.as_dict(),
        "total_loss": total_loss(scalar, reduced),
        "total_error": sum(record["error"] for record in objects),
        "region_cardinalities": _cardinalities(objects),
    }
    return DecisionReport("decide", _config_echo(config, inputs), objects, summary)


def _run_decide_iv(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    dataset = _dataset(inputs)
    losses = _losses(inputs)
    scalar = reduce(dataset, config.theta)

    objects = _grade_records(dataset, config.theta)
    for record in objects:
        m = record["m_theta"]
        result = assess(m, losses, config.epsilon)
        record.update({
            "situation": result.risks.situation.value,
            "value": result.value,
            "region": result.action.region,
            "action": result.action.value,
            "risks": {
                "e": interval_list(result.risks.r_e),
                "r": interval_list(result.risks.r_r),
                "s": interval_list(result.risks.r_s),
            },
            "matrix": result.matrix.as_lists(),
            "totals": {"p_e": result.totals.p_e, "p_r": result.totals.p_r, "p_s": result.totals.p_s},
            "regimes": {pair: regime.value for pair, regime in zip(("er", "es", "rs"), result.regimes.as_tuple())},
            "allowed": sorted(allowed_outcomes(result.regimes)),
            "error": abs(m - result.value),
        })
    cutpoints = {}
    for situation in Situation:
        cutpoints[situation.value] = {
            pair: {
                "certain_above": None if cut.certain_above is None else interval_list(cut.certain_above),
                "certain_below": None if cut.certain_below is None else interval_list(cut.certain_below),
            }
            for pair, cut in regime_cutpoints(losses, situation).items()
        }
    summary = {
        "losses": losses.as_dict(),
        "total_risk": interval_list(total_risk_interval(scalar, losses, config.epsilon)),
        "total_error": sum(record["error"] for record in objects),
        "region_cardinalities": _cardinalities(objects),
        "regime_cutpoints": cutpoints,
    }
    return DecisionReport("decide-iv", _config_echo(config, inputs), objects, summary)


def _run_check(config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    suites = [
        possibility_consistency_suite(config.seed, config.cases, config.epsilon, config.grid_points),
        threshold_oracle_suite(config.seed, config.profiles, config.grid_points),
        # optimiser scan runs ten times finer than the decision grid
        optimizer_oracle_suite(config.seed, config.datasets, (config.grid_points - 1) * 10 + 1),
    ]
    objects = []
    for suite in suites:
        failed = {}
        for violation in suite.violations:
            failed[violation["check"]] = failed.get(violation["check"], 0) + 1
        for kind, n in sorted(suite.checks.items()):
            objects.append({"suite": suite.name, "check": kind, "count": n, "violations": failed.get(kind, 0)})
    merged = SuiteReport.merge("check", suites)
    summary = {
        "checks": sum(merged.checks.values()),
        "violations": len(merged.violations),
        "errata": merged.errata,
        "ok": merged.ok,
        "details": merged.violations,
    }
    exit_code = 0 if merged.ok else ORACLE_EXIT_CODE
    return DecisionReport("check", _config_echo(config, inputs), objects, summary, exit_code)


SUBCOMMANDS: Dict[str, Callable[[RunConfig, Mapping[str, Any]], DecisionReport]] = {
    "reduce": _run_reduce,
    "shadow": _run_shadow,
    "approx": _run_approx,
    "thresholds": _run_thresholds,
    "decide": _run_decide,
    "decide-iv": _run_decide_iv,
    "check": _run_check,
}


def run_subcommand(name: str, config: RunConfig, inputs: Mapping[str, Any]) -> DecisionReport:
    """
    Run one pipeline and assemble its report.

    Args:
        name: one of SUBCOMMANDS
        config: effective run settings
        inputs: 'dataset' and 'losses' paths, optional 'alpha' and 'beta'

    Raises:
        ThreeWayError: invalid or missing input.
    """
    if name not in SUBCOMMANDS:
        raise ParseError(f"unknown subcommand '{name}'")
    logger.debug("running %s with %s", name, config)
    return SUBCOMMANDS[name](config, inputs)


def run_options(f):
    """Flags shared by every subcommand; a flag a subcommand does not use is ignored."""
    options = [
        click.option("--dataset", type=click.Path(dir_okay=False), default=None,
                     help="CSV file with header id,lo,hi"),
        click.option("--losses", type=click.Path(dir_okay=False), default=None,
                     help="JSON file with lambda_e, lambda_r, lambda_sd, lambda_su"),
        click.option("--theta", type=float, default=None, help="θ of the m_θ reduction [default: 0.5]"),
        click.option("--alpha", type=float, default=None, help="Upper threshold, in (0.5, 1]"),
        click.option("--beta", type=float, default=None, help="Lower threshold, in [0, 0.5)"),
        click.option("--grid", "grid_points", type=int, default=None, help="Grid points of oracle scans [default: 1001]"),
        click.option("--seed", type=int, default=None, help="Seed of random instances [default: 42]"),
        click.option("--epsilon", type=float, default=None, help="Possibility-degree snapping tolerance [default: 1e-9]"),
        click.option("--format", "output_format", type=click.Choice(["json", "csv"]), default=None,
                     help="Report format [default: json]"),
        click.option("--cases", type=int, default=None, help="Random cases of the possibility suite [default: 10000]"),
        click.option("--verbose", is_flag=True, help="Log debug output to stderr"),
    ]
    for option in reversed(options):
        f = option(f)
    return f


def _invoke(name: str, options: Dict[str, Any]) -> None:
    configure_logging(options.pop("verbose", False))
    try:
        config = RunConfig.from_dict(options)
        report = run_subcommand(name, config, options)
        text = report.render(config.output_format)
    except ThreeWayError as e:
        click.echo(f"Error: {e}", err=True)
        sys.exit(VALIDATION_EXIT_CODE)
    click.echo(text.rstrip("\n"))
    if report.exit_code:
        sys.exit(report.exit_code)


@click.group()
@click.version_option(version="1.0.0", prog_name="threeway")
def cli():
    """Three-way approximations of interval-valued fuzzy sets."""


@cli.command("reduce")
@run_options
def reduce_command(**options):
    """Table of θ-reduced grades."""
    _invoke("reduce", options)


@cli.command("shadow")
@run_options
def shadow_command(**options):
    """Shadowed set; thresholds optimised for balance unless --alpha/--beta are given."""
    _invoke("shadow", options)


@cli.command("approx")
@run_options
def approx_command(**options):
    """Error-based three-way approximation (defaults: alpha 0.75, beta 0.25)."""
    _invoke("approx", options)


@cli.command("thresholds")
@run_options
def thresholds_command(**options):
    """Closed-form thresholds of the θ-reduced loss profile."""
    _invoke("thresholds", options)


@cli.command("decide")
@run_options
def decide_command(**options):
    """Decisions from θ-reduced losses and their thresholds."""
    _invoke("decide", options)


@cli.command("decide-iv")
@run_options
def decide_iv_command(**options):
    """Decisions from interval risks ranked by possibility degree."""
    _invoke("decide-iv", options)


@cli.command("check")
@run_options
def check_command(**options):
    """Run the oracle suites; exit 2 on any violation."""
    _invoke("check", options)
