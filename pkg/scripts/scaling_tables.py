"""Statistics tables for the compositional and chained families.

Prints one CSV row per (family, k, configuration), with the same columns as
``dsqsat sweep``. Eager runs stop at ``--time-limit`` and report UNKNOWN.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from dsqsat.bench import CHAINED, COMPOSITIONAL, generate
from dsqsat.engine import BudgetExceeded, SearchStats, SolverConfig, solve


def _configs(family: str, inst):
    yield "lazy", SolverConfig(mode="lazy")
    yield "lazy-no-srb", SolverConfig(mode="lazy", srb_enabled=False)
    yield "eager", SolverConfig(mode="eager")
    if family == CHAINED:
        yield "lazy-comm-first", SolverConfig(
            mode="lazy", branch_order="communication_first", order=tuple(inst.communication_vars)
        )


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--family", choices=(COMPOSITIONAL, CHAINED), action="append")
    p.add_argument("--k", type=int, nargs="+", default=[100, 200, 400, 800, 1600])
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--time-limit", type=float, default=30.0)
    args = p.parse_args(argv)

    cols = ["family", "k", "config", "verdict", "seconds"] + SearchStats.field_names()
    w = csv.DictWriter(sys.stdout, fieldnames=cols, lineterminator="\n")
    w.writeheader()
    for family in args.family or [COMPOSITIONAL, CHAINED]:
        for k in args.k:
            inst = generate(family, k, args.seed)
            for name, cfg in _configs(family, inst):
                t0 = time.perf_counter()
                try:
                    res = solve(inst.formula, cfg, keep_log=False, time_limit=args.time_limit)
                    verdict, stats = res.verdict.value, res.stats
                except BudgetExceeded as exc:
                    verdict, stats = "UNKNOWN", exc.stats
                row = {"family": family, "k": k, "config": name, "verdict": verdict}
                row["seconds"] = round(time.perf_counter() - t0, 3)
                row.update(stats.as_dict())
                w.writerow(row)
                sys.stdout.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
