#!/usr/bin/env python3
"""Print the aggregate analysis tables for a cohort-level result.

Takes the binary confusion cells and self-consistency probabilities as
inputs and prints classification metrics with Wilson intervals, the
consistency ceiling against observed accuracy, and the population
reweighting projection. Defaults reproduce the shipped worked example.
"""

from __future__ import annotations

import argparse
import sys

from medreview.analysis import consistency_ceiling, reweight_population
from medreview.scoring.metrics import ConfusionCells, binary_metrics


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--cells", default="206,12,59,0",
                        help="Confusion cells tp,fp,tn,fn.")
    parser.add_argument("--p-reflag", type=float, default=0.964)
    parser.add_argument("--p-stay-negative", type=float, default=0.629)
    parser.add_argument("--observed-accuracy", type=float, default=0.957)
    parser.add_argument("--flag-rate", type=float, default=0.463)
    parser.add_argument("--ppv", type=float, default=0.902)
    parser.add_argument("--npv", type=float, default=1.000)
    return parser.parse_args()


def fmt(metric) -> str:
    if metric is None:
        return "undefined"
    return (
        f"{100 * metric.value:5.1f}% "
        f"[{100 * metric.ci_low:.1f}, {100 * metric.ci_high:.1f}]"
    )


def main() -> int:
    args = parse_args()
    tp, fp, tn, fn = (int(x) for x in args.cells.split(","))
    cells = ConfusionCells(tp=tp, fp=fp, tn=tn, fn=fn)
    m = binary_metrics(cells)

    print(f"classification over {cells.total} patients "
          f"(tp={tp} fp={fp} tn={tn} fn={fn})")
    print(f"  sensitivity  {fmt(m.sensitivity)}")
    print(f"  specificity  {fmt(m.specificity)}")
    print(f"  ppv          {fmt(m.ppv)}")
    print(f"  npv          {fmt(m.npv)}")
    print(f"  accuracy     {fmt(m.accuracy)}")
    kappa = "undefined" if m.kappa is None else f"{m.kappa:.3f}"
    f1 = "undefined" if m.f1 is None else f"{m.f1:.3f}"
    print(f"  kappa        {kappa}")
    print(f"  f1           {f1}")

    ceiling = consistency_ceiling(
        args.p_reflag, args.p_stay_negative, tp, tn + fp
    )
    gap = args.observed_accuracy - ceiling
    print("\nself-consistency")
    print(f"  P(re-flag | flagged)          {args.p_reflag:.3f}")
    print(f"  P(stay negative | negative)   {args.p_stay_negative:.3f}")
    print(f"  ceiling accuracy              {100 * ceiling:.1f}%")
    print(f"  anchoring gap vs observed     {100 * gap:.1f} points")

    pop = reweight_population(args.flag_rate, args.ppv, args.npv)
    print(f"\npopulation projection at flag rate {args.flag_rate:.3f}")
    for name in ("prevalence", "sensitivity", "specificity",
                 "ppv", "npv", "accuracy", "kappa", "f1"):
        value = getattr(pop, name)
        shown = "undefined" if value is None else f"{value:.3f}"
        print(f"  {name:<12} {shown}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
