"""Command-line front end.

Exit codes follow SAT-competition practice: 10 for SAT, 20 for UNSAT,
1 for usage or input errors, 3 when ``verify`` finds an invalid entry.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

from .bench import CHAINED, COMPOSITIONAL, INTERLEAVED, BLOCKED, generate, read_order_file, write_order_file
from .engine import (
    COMMUNICATION_FIRST,
    DEFAULT_ORDER,
    FORCED_ORDER,
    BudgetExceeded,
    SearchStats,
    SolverConfig,
    Verdict,
    gen_sat_assgn,
    solve,
)
from .formula import DimacsError, evaluate, read_dimacs, write_dimacs
from .oracles import OracleSizeError
from .verify import replay_log

EXIT_SAT = 10
EXIT_UNSAT = 20
EXIT_USAGE = 1
EXIT_VERIFY_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _on_off(s: str) -> bool:
    if s not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return s == "on"


def _k_list(s: str) -> list[int]:
    try:
        ks = [int(t) for t in s.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad k list {s!r}") from None
    if not ks or any(k < 1 for k in ks):
        raise argparse.ArgumentTypeError("k values must be positive")
    return ks


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("lazy", "eager"), default="lazy")
    p.add_argument("--srb", type=_on_off, default=True, metavar="on|off")
    p.add_argument("--first-value", type=int, choices=(0, 1), default=0)
    p.add_argument(
        "--branch-order",
        default=DEFAULT_ORDER,
        help="default, forced:<file> or communication-first[:<file>]",
    )
    p.add_argument("--time-limit", type=float, default=None, help="seconds before giving up")


def _parse_order(text: str, fallback: Sequence[int] = ()) -> tuple[str, tuple[int, ...]]:
    name, _, path = text.partition(":")
    name = name.replace("-", "_")
    if name == DEFAULT_ORDER:
        if path:
            raise UsageError("the default branch order takes no file")
        return DEFAULT_ORDER, ()
    if name not in (FORCED_ORDER, COMMUNICATION_FIRST):
        raise UsageError(f"unknown branch order {text!r}")
    if path:
        try:
            return name, tuple(read_order_file(path))
        except OSError as exc:
            raise UsageError(f"cannot read order file: {exc}") from None
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if name == COMMUNICATION_FIRST and fallback is not None:
        return name, tuple(fallback)
    raise UsageError(f"branch order {name} needs a file")


def _config(args, fallback_order: Sequence[int] | None = None) -> SolverConfig:
    order_name, order = _parse_order(args.branch_order, fallback_order)
    try:
        return SolverConfig(
            mode=args.mode,
            srb_enabled=args.srb,
            branch_order=order_name,
            order=order,
            first_value=args.first_value,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _print_stats(stats: SearchStats, fmt: str, out) -> None:
    d = stats.as_dict()
    if fmt == "json":
        out.write(json.dumps(d, sort_keys=False) + "\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=SearchStats.field_names(), lineterminator="\n")
        w.writeheader()
        w.writerow(d)
    else:
        for k, v in d.items():
            out.write(f"c {k} {v}\n")


def cmd_solve(args) -> int:
    try:
        f = read_dimacs(args.input)
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from None
    cfg = _config(args, fallback_order=None)
    out = sys.stdout
    t0 = time.perf_counter()
    try:
        res = solve(f, cfg, keep_log=bool(args.log), time_limit=args.time_limit)
    except BudgetExceeded as exc:
        out.write("UNKNOWN\n")
        _print_stats(exc.stats, args.stats, out)
        return 0
    elapsed = time.perf_counter() - t0
    if args.log:
        with open(args.log, "w") as fh:
            fh.write("\n".join(res.log) + ("\n" if res.log else ""))
    out.write(f"{res.verdict.value}\n")
    if args.assignment and res.sat:
        model = gen_sat_assgn(f, cfg)
        assert model.assignment is not None and evaluate(f, model.assignment)
        lits = [v if model.assignment[v] else -v for v in range(1, f.num_vars + 1)]
        out.write("v " + " ".join(map(str, lits)) + " 0\n")
        out.write(f"c qsat_calls {model.qsat_calls}\n")
    if args.stats:
        _print_stats(res.stats, args.stats, out)
    else:
        out.write(f"c seconds {elapsed:.3f}\n")
    return EXIT_SAT if res.verdict is Verdict.SAT else EXIT_UNSAT


def cmd_gen(args) -> int:
    inst = generate(args.family, args.k, args.seed, args.numbering)
    write_dimacs(inst.formula, args.output)
    msg = f"wrote {args.output}: {inst.formula.num_vars} vars, {len(inst.formula.clauses)} clauses"
    if inst.family == CHAINED:
        comm = args.comm_output or args.output + ".comm"
        write_order_file(comm, inst.communication_vars)
        msg += f"; communication vars in {comm}"
    print(msg)
    return 0


def cmd_verify(args) -> int:
    try:
        f = read_dimacs(args.input)
        with open(args.log) as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(str(exc)) from None
    try:
        rep = replay_log(f, text, escape=not args.no_escape)
    except OracleSizeError as exc:
        raise UsageError(str(exc)) from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    print(f"checked {rep.dseqs_checked} D-sequents and {rep.resolvents_checked} resolvents")
    for line in rep.failures:
        print(f"FAIL {line}")
    print("OK" if rep.ok else "INVALID")
    return 0 if rep.ok else EXIT_VERIFY_FAILED


def _sweep_one(job):
    family, k, seed, numbering, cfg, time_limit = job
    inst = generate(family, k, seed, numbering)
    if cfg.branch_order == COMMUNICATION_FIRST and not cfg.order:
        cfg = SolverConfig(cfg.mode, cfg.srb_enabled, cfg.branch_order, tuple(inst.communication_vars), cfg.first_value)
    row = {"family": family, "k": k, "num_vars": inst.formula.num_vars, "num_clauses": len(inst.formula.clauses)}
    t0 = time.perf_counter()
    try:
        res = solve(inst.formula, cfg, keep_log=False, time_limit=time_limit)
        row["verdict"] = res.verdict.value
        stats = res.stats
    except BudgetExceeded as exc:
        row["verdict"] = "UNKNOWN"
        stats = exc.stats
    row["seconds"] = round(time.perf_counter() - t0, 3)
    row.update(stats.as_dict())
    return row


def cmd_sweep(args) -> int:
    # communication-first without a file uses each instance's own shared vars
    cfg = _config(args, fallback_order=())
    jobs = [(args.family, k, args.seed, args.numbering, cfg, args.time_limit) for k in args.k]
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as ex:
            rows = list(ex.map(_sweep_one, jobs))
    else:
        rows = [_sweep_one(j) for j in jobs]
    buf = io.StringIO()
    if args.stats == "json":
        buf.write(json.dumps(rows, indent=1) + "\n")
    else:
        w = csv.DictWriter(buf, fieldnames=list(rows[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(buf.getvalue())
    else:
        sys.stdout.write(buf.getvalue())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dsqsat", description="SAT solving by branching with D-sequents.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("solve", help="decide a DIMACS file")
    s.add_argument("input")
    _add_solver_flags(s)
    s.add_argument("--assignment", action="store_true", help="also build and print a model")
    s.add_argument("--stats", choices=("plain", "json", "csv"), default=None)
    s.add_argument("--log", metavar="PATH", help="write the derivation log")
    s.set_defaults(func=cmd_solve)

    g = sub.add_parser("gen", help="generate a benchmark instance")
    g.add_argument("--family", choices=(COMPOSITIONAL, CHAINED), required=True)
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--numbering", choices=(INTERLEAVED, BLOCKED), default=INTERLEAVED)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--comm-output", help="communication variable file (chained only)")
    g.set_defaults(func=cmd_gen)

    v = sub.add_parser("verify", help="replay a derivation log with brute-force oracles")
    v.add_argument("input")
    v.add_argument("log")
    v.add_argument("--no-escape", action="store_true", help="check plain redundancy only")
    v.set_defaults(func=cmd_verify)

    w = sub.add_parser("sweep", help="solve a family over several k and tabulate statistics")
    w.add_argument("--family", choices=(COMPOSITIONAL, CHAINED), required=True)
    w.add_argument("--k", type=_k_list, required=True, help="comma separated, e.g. 10,20,40")
    w.add_argument("--seed", type=int, default=0)
    w.add_argument("--numbering", choices=(INTERLEAVED, BLOCKED), default=INTERLEAVED)
    _add_solver_flags(w)
    w.add_argument("--stats", choices=("csv", "json"), default="csv")
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("-o", "--output")
    w.set_defaults(func=cmd_sweep)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    p = build_parser()
    try:
        args = p.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"dsqsat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DimacsError as exc:
        print(f"dsqsat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
