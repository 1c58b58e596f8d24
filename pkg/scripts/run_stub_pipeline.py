#!/usr/bin/env python3
"""Run the full evaluation pipeline offline against the stub endpoint.

Generates a synthetic cohort with planted indicator cases, evaluates the
shipped indicator rules, draws the stratified evaluation set, runs
multi-epoch stub reviews into a session store, and prints progress plus
the per-indicator prevalence rows. Everything is deterministic given the
seeds, so repeated runs into fresh directories produce the same session.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from medreview.ehr.codes import load_default_dictionary
from medreview.ehr.cohort import (
    CohortSpec,
    DEFAULT_REVIEW_DATE,
    PlantSpec,
    generate_cohort,
    save_cohort,
)
from medreview.indicators.engine import apply_continuity, evaluate_rule, prevalence_stats
from medreview.indicators.parser import load_shipped_rules
from medreview.runner.client import ModelConfig, StubEndpointServer
from medreview.runner.run import run_review
from medreview.runner.sampling import (
    EvaluationSet,
    MatcherConfig,
    SampleCounts,
    sample_cases,
)
from medreview.store import Store


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="Output directory.")
    parser.add_argument("--size", type=int, default=200)
    parser.add_argument("--plants-per-filter", type=int, default=3)
    parser.add_argument("--epochs", type=int, default=3)
    parser.add_argument("--seed", type=int, default=20230601)
    parser.add_argument("--session", default="stub-pipeline")
    parser.add_argument(
        "--counts",
        default="8,8,4,4",
        help="Stratum sizes: positive,matched,flagged,unflagged.",
    )
    return parser.parse_args()


def main() -> int:
    args = parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    codes = load_default_dictionary()
    rules = load_shipped_rules(codes)

    plants = tuple(PlantSpec(rule.id, args.plants_per_filter) for rule in rules)
    profiles, manifest = generate_cohort(
        CohortSpec(size=args.size, plants=plants), seed=args.seed, codes=codes
    )
    save_cohort(profiles, manifest, out / "cohort")
    print(f"cohort: {len(profiles)} patients, {len(manifest.plants)} planted")

    matches: dict[str, list[str]] = {p.patient_id: [] for p in profiles}
    for rule in rules:
        for p in profiles:
            intervals = evaluate_rule(rule, p, DEFAULT_REVIEW_DATE, codes)
            matched, _ = apply_continuity(intervals, rule.continuity_min_days)
            if matched:
                matches[p.patient_id].append(rule.id)
    rows = prevalence_stats(profiles, rules, DEFAULT_REVIEW_DATE, codes)
    for row in rows:
        print(
            f"  {row.indicator_id}: {row.matched_patients} matched, "
            f"{row.pct_time_matching:.2f}% of patient-time"
        )

    negatives = sorted(pid for pid, ids in matches.items() if not ids)
    flags = {pid: i % 2 == 0 for i, pid in enumerate(negatives)}
    counts = SampleCounts(*(int(x) for x in args.counts.split(",")))
    evaluation_set: EvaluationSet = sample_cases(
        profiles,
        matches,
        counts,
        MatcherConfig(as_of=DEFAULT_REVIEW_DATE),
        flags,
        seed=args.seed,
    )
    (out / "evalset.json").write_text(json.dumps(evaluation_set.to_dict(), indent=2))
    print(f"evaluation set: {len(evaluation_set.all_ids())} patients")

    store = Store(out / "store")
    store.create_session(
        args.session,
        cohort_ref=str(out / "cohort"),
        evaluation_set=evaluation_set,
        model_configs=[{"model_name": "stub"}],
    )
    by_id = {p.patient_id: p for p in profiles}
    with StubEndpointServer() as url:
        cfg = ModelConfig(model_name="stub", endpoint=url)
        for pid in evaluation_set.all_ids():
            run_review(
                by_id[pid],
                cfg,
                epochs=args.epochs,
                seed_tag=args.session,
                as_of=DEFAULT_REVIEW_DATE,
                store=store,
                session_id=args.session,
            )
    print(f"session {args.session}: {store.progress(args.session)}")
    print(f"store ready at {out / 'store'}; serve with:")
    print(
        f"  medreview serve --cohort {out / 'cohort'} --store {out / 'store'} "
        f"--session {args.session}"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
