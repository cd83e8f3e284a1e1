"""Random differential testing: every configuration against the brute-force
oracle, with invariant checks at each node and a replay of the derivation
log. Failing formulas are printed as DIMACS."""

from __future__ import annotations

import argparse
import random
import sys
import time

from dsqsat.bench import random_cnf
from dsqsat.engine import SolverConfig, solve
from dsqsat.formula import emit_dimacs
from dsqsat.oracles import brute_force_qsat
from dsqsat.verify import replay_log


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-vars", type=int, default=12)
    p.add_argument("--max-clauses", type=int, default=40)
    args = p.parse_args(argv)

    rng = random.Random(args.seed)
    configs = [
        SolverConfig(mode=m, srb_enabled=s, first_value=fv, debug=True)
        for m in ("lazy", "eager")
        for s in (True, False)
        for fv in (0, 1)
    ]
    failures = 0
    t0 = time.perf_counter()
    for i in range(args.count):
        f = random_cnf(rng, args.max_vars, args.max_clauses)
        truth = brute_force_qsat(f)
        for cfg in configs:
            problem = None
            try:
                res = solve(f, cfg)
                if res.sat != truth:
                    problem = f"verdict {res.verdict.value}, oracle says {'SAT' if truth else 'UNSAT'}"
                else:
                    rep = replay_log(f, res.log)
                    if not rep.ok:
                        problem = rep.failures[0]
            except AssertionError as exc:
                problem = f"invariant: {exc}"
            if problem:
                failures += 1
                print(f"instance {i} {cfg.mode} srb={cfg.srb_enabled} first={cfg.first_value}: {problem}")
                print(emit_dimacs(f))
    print(f"{args.count} instances x {len(configs)} configs, {failures} failures, {time.perf_counter() - t0:.1f} s")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
