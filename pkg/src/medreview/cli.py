"""Command-line entry points for the evaluation pipeline.

Subcommands cover cohort generation, indicator runs, evaluation-set
sampling, model review runs, scoring, aggregate analysis, and the
grading API server. Failures exit nonzero with a one-line JSON error
document on stderr so wrappers can parse outcomes mechanically.
"""

from __future__ import annotations

import functools
import json
import sys
from datetime import date
from pathlib import Path

import click

from .ehr.cohort import (
    CohortSpec,
    DEFAULT_REVIEW_DATE,
    PlantSpec,
    generate_cohort,
    load_cohort,
    save_cohort,
)
from .ehr.codes import load_default_dictionary
from .indicators.engine import apply_continuity, evaluate_rule, prevalence_stats, write_prevalence_csv
from .indicators.parser import load_rules_dir, load_shipped_rules
from .runner.client import ModelConfig, StubEndpointServer
from .runner.run import run_review
from .runner.sampling import EvaluationSet, MatcherConfig, SampleCounts, sample_cases
from .scoring.composite import clinician_score
from .scoring.levels import classify_levels
from .store import Store


class ConfigError(ValueError):
    """One or more config problems; the message lists all of them."""


_CONFIG_SCHEMA = {
    "endpoint": {"url": str, "model": str},
    "paths": {"cohort": str, "store": str},
    "seeds": {"cohort": int, "sampling": int},
}


def validate_config(cfg: dict) -> list[str]:
    problems = []
    if not isinstance(cfg, dict):
        return ["config root must be a JSON object"]
    for section, fields in _CONFIG_SCHEMA.items():
        block = cfg.get(section)
        if block is None:
            problems.append(f"missing section {section!r}")
            continue
        if not isinstance(block, dict):
            problems.append(f"section {section!r} must be an object")
            continue
        for name, typ in fields.items():
            if name not in block:
                problems.append(f"{section}.{name} is missing")
            elif not isinstance(block[name], typ) or isinstance(block[name], bool):
                problems.append(f"{section}.{name} must be {typ.__name__}")
    effort = cfg.get("endpoint", {}).get("reasoning_effort") if isinstance(cfg, dict) else None
    if effort is not None and effort not in ("low", "medium", "high"):
        problems.append("endpoint.reasoning_effort must be low, medium, or high")
    return problems


def load_config(path: str) -> dict:
    try:
        cfg = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from None
    problems = validate_config(cfg)
    if problems:
        raise ConfigError("; ".join(problems))
    return cfg


def _fail(code: str, message: str) -> None:
    sys.stderr.write(json.dumps({"code": code, "message": message}) + "\n")
    sys.exit(1)


def _guarded(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ConfigError as e:
            _fail("config_error", str(e))
        except (ValueError, KeyError, OSError, RuntimeError) as e:
            _fail("command_error", f"{type(e).__name__}: {e}")

    return wrapper


def _parse_date(value: str) -> date:
    return date.fromisoformat(value)


@click.group()
def main() -> None:
    """Medication-review evaluation pipeline."""


@main.command()
@click.option("--size", type=int, required=True, help="Number of patients.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--plant",
    "plants",
    multiple=True,
    help="Planted stratum as indicator=count, e.g. filter_26=5. Repeatable.",
)
@click.option("--out", "out_dir", required=True, type=click.Path())
@_guarded
def generate(size: int, seed: int, plants: tuple[str, ...], out_dir: str) -> None:
    """Generate a synthetic cohort with optional planted indicator cases."""
    plant_specs = []
    for item in plants:
        indicator, _, count = item.partition("=")
        if not count:
            raise ConfigError(f"bad --plant {item!r}, expected indicator=count")
        plant_specs.append(PlantSpec(indicator_id=indicator, count=int(count)))
    profiles, manifest = generate_cohort(
        CohortSpec(size=size, plants=tuple(plant_specs)), seed=seed
    )
    save_cohort(profiles, manifest, out_dir)
    click.echo(json.dumps({"patients": len(profiles), "out": out_dir}))


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--rules", "rules_dir", type=click.Path(exists=True), default=None)
@click.option("--review-date", default=str(DEFAULT_REVIEW_DATE), show_default=True)
@click.option("--out", "out_csv", required=True, type=click.Path())
@click.option(
    "--matches-out",
    type=click.Path(),
    default=None,
    help="Also write per-patient matched indicator ids as JSON.",
)
@_guarded
def indicators(cohort_dir, rules_dir, review_date, out_csv, matches_out) -> None:
    """Evaluate indicator rules over a cohort and write prevalence rows."""
    codes = load_default_dictionary()
    rules = load_rules_dir(rules_dir, codes) if rules_dir else load_shipped_rules(codes)
    profiles, _ = load_cohort(cohort_dir)
    horizon = _parse_date(review_date)
    rows = prevalence_stats(profiles, rules, horizon, codes)
    write_prevalence_csv(rows, out_csv)
    if matches_out:
        matches: dict[str, list[str]] = {p.patient_id: [] for p in profiles}
        for rule in rules:
            for p in profiles:
                ivs = evaluate_rule(rule, p, horizon, codes)
                matched, _ = apply_continuity(ivs, rule.continuity_min_days)
                if matched:
                    matches[p.patient_id].append(rule.id)
        Path(matches_out).write_text(json.dumps(matches, indent=2, sort_keys=True))
    click.echo(json.dumps({"indicators": len(rows), "out": out_csv}))


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--matches", "matches_path", required=True, type=click.Path(exists=True))
@click.option(
    "--counts",
    required=True,
    help="Four comma-separated stratum sizes: positive,matched,flagged,unflagged.",
)
@click.option(
    "--flags",
    "flags_path",
    type=click.Path(exists=True),
    default=None,
    help="JSON map patient_id -> bool system flag for strategy 3.",
)
@click.option("--as-of", default=str(DEFAULT_REVIEW_DATE), show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@_guarded
def sample(cohort_dir, matches_path, counts, flags_path, as_of, seed, out_path) -> None:
    """Draw the stratified evaluation set from indicator results."""
    parts = [int(x) for x in counts.split(",")]
    if len(parts) != 4:
        raise ConfigError("--counts needs exactly four integers")
    profiles, _ = load_cohort(cohort_dir)
    matches = json.loads(Path(matches_path).read_text())
    flags = json.loads(Path(flags_path).read_text()) if flags_path else {}
    evaluation_set = sample_cases(
        profiles,
        {pid: list(ids) for pid, ids in matches.items()},
        SampleCounts(*parts),
        MatcherConfig(as_of=_parse_date(as_of)),
        {pid: bool(v) for pid, v in flags.items()},
        seed=seed,
    )
    Path(out_path).write_text(json.dumps(evaluation_set.to_dict(), indent=2))
    click.echo(json.dumps({"sampled": len(evaluation_set.all_ids()), "out": out_path}))


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--evalset", "evalset_path", required=True, type=click.Path(exists=True))
@click.option("--store", "store_dir", required=True, type=click.Path())
@click.option("--session", "session_id", required=True)
@click.option("--endpoint", default=None, help="Chat-completion endpoint URL.")
@click.option("--model", default="stub", show_default=True)
@click.option("--effort", type=click.Choice(["low", "medium", "high"]), default=None)
@click.option("--epochs", type=int, default=1, show_default=True)
@click.option("--as-of", default=str(DEFAULT_REVIEW_DATE), show_default=True)
@click.option("--stub", is_flag=True, help="Use the built-in offline stub endpoint.")
@_guarded
def review(
    cohort_dir, evalset_path, store_dir, session_id,
    endpoint, model, effort, epochs, as_of, stub,
) -> None:
    """Run model reviews for every patient in the evaluation set."""
    if endpoint is None and not stub:
        raise ConfigError("either --endpoint or --stub is required")
    profiles, _ = load_cohort(cohort_dir)
    by_id = {p.patient_id: p for p in profiles}
    evaluation_set = EvaluationSet.from_dict(json.loads(Path(evalset_path).read_text()))
    store = Store(store_dir)
    store.create_session(
        session_id,
        cohort_ref=str(cohort_dir),
        evaluation_set=evaluation_set,
        model_configs=[{"model_name": model, "reasoning_effort": effort}],
    )
    as_of_date = _parse_date(as_of)

    def run_all(url: str) -> int:
        cfg = ModelConfig(model_name=model, endpoint=url, reasoning_effort=effort)
        done = 0
        for pid in evaluation_set.all_ids():
            run_review(
                by_id[pid], cfg, epochs=epochs, seed_tag=session_id,
                as_of=as_of_date, store=store, session_id=session_id,
            )
            done += 1
        return done

    if stub:
        with StubEndpointServer() as url:
            done = run_all(url)
    else:
        done = run_all(endpoint)
    click.echo(json.dumps({"session": session_id, "reviewed": done}))


@main.command()
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--out", "out_path", default=None, type=click.Path())
@_guarded
def score(store_dir, session_id, out_path) -> None:
    """Score assessed patients and export the session report bundle."""
    store = Store(store_dir)
    record = store.load_session(session_id)
    results = {}
    for pid, status in record.status.items():
        if status.value != "assessed":
            continue
        outputs, _ = store.load_review(session_id, pid)
        assessment = store.latest_assessment(session_id, pid)
        results[pid] = {
            "clinician_score": clinician_score(outputs[0], assessment),
            "levels": classify_levels(outputs[0], assessment).to_dict(),
        }
    if not results:
        raise ConfigError(f"session {session_id} has no assessed patients")
    reports = store.export_report(session_id)
    doc = json.dumps({"session": session_id, "scores": results}, indent=2, sort_keys=True)
    if out_path:
        Path(out_path).write_text(doc)
    else:
        (reports / "scores.json").write_text(doc)
    click.echo(json.dumps({"scored": len(results), "reports": str(reports)}))


@main.group()
def analyze() -> None:
    """Aggregate statistics over a completed session."""


@analyze.command()
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--observed-accuracy", type=float, default=None)
@_guarded
def consistency(store_dir, session_id, observed_accuracy) -> None:
    """Self-consistency report from multi-epoch reviews."""
    from .analysis import self_consistency

    store = Store(store_dir)
    record = store.load_session(session_id)
    runs, flags = [], []
    for pid, status in record.status.items():
        if status.value not in ("reviewed", "assessed"):
            continue
        outputs, _ = store.load_review(session_id, pid)
        if len(outputs) < 2:
            continue
        runs.append([o.intervention_probability for o in outputs])
        flags.append([o.intervention_required for o in outputs])
    if not runs:
        raise ConfigError("no multi-epoch reviews in session")
    n_pos = sum(1 for f in flags if f[0])
    report = self_consistency(
        runs, flags, n_pos, len(flags) - n_pos, observed_accuracy=observed_accuracy
    )
    click.echo(json.dumps(report.to_dict(), indent=2))


@analyze.command()
@click.option("--flag-rate", type=float, required=True)
@click.option("--ppv", type=float, required=True)
@click.option("--npv", type=float, required=True)
@_guarded
def reweight(flag_rate, ppv, npv) -> None:
    """Project cohort metrics onto a population with the given flag rate."""
    from .analysis import reweight_population

    click.echo(json.dumps(reweight_population(flag_rate, ppv, npv).to_dict(), indent=2))


@analyze.command()
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@_guarded
def failures(store_dir, session_id) -> None:
    """Tally failure annotations across assessed patients."""
    from .analysis import failure_tally

    store = Store(store_dir)
    record = store.load_session(session_id)
    pairs = []
    for pid, status in record.status.items():
        if status.value != "assessed":
            continue
        assessment = store.latest_assessment(session_id, pid)
        pairs.extend((pid, a) for a in assessment.failure_annotations)
    click.echo(json.dumps(failure_tally(pairs).to_dict(), indent=2))


@main.command()
@click.option("--cohort", "cohort_dir", required=True, type=click.Path(exists=True))
@click.option("--store", "store_dir", required=True, type=click.Path(exists=True))
@click.option("--session", "session_id", required=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8400, show_default=True)
@click.option("--as-of", default=str(DEFAULT_REVIEW_DATE), show_default=True)
@_guarded
def serve(cohort_dir, store_dir, session_id, host, port, as_of) -> None:
    """Serve the grading API for one session on localhost."""
    from .api import create_app, serve as run_server

    store = Store(store_dir)
    store.load_session(session_id)
    profiles, _ = load_cohort(cohort_dir)
    app = create_app(
        store, session_id, {p.patient_id: p for p in profiles}, _parse_date(as_of)
    )
    run_server(app, host=host, port=port)


if __name__ == "__main__":
    main()
