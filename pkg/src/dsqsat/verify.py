"""Replay a derivation log against the brute-force oracles."""

from __future__ import annotations

from dataclasses import dataclass, field

from .dsequent import parse_log
from .formula import Formula
from .oracles import PointTable, brute_force_qsat, dseq_valid, implied


@dataclass
class ReplayReport:
    dseqs_checked: int = 0
    resolvents_checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def replay_log(original: Formula, log: str | list[str], escape: bool = True) -> ReplayReport:
    """Check each logged D-sequent against the formula as it stood when the
    D-sequent was derived (original clauses plus earlier resolvents), and
    each resolvent for implication by the original formula."""
    text = log if isinstance(log, str) else "\n".join(log)
    entries = parse_log(text)
    rep = ReplayReport()
    # resolvents keep the formula equisatisfiable, so the escape is decided once
    escaped = escape and brute_force_qsat(original)
    if original.num_vars <= PointTable.MAX_VARS:
        table = PointTable(original)
        implied_by_f = PointTable(original).implies
        valid = lambda ctx, z: table.dseq_valid(ctx, z, escape=False)  # noqa: E731
        grow = table.add_clause
    else:
        cur = original.copy()
        implied_by_f = lambda lits: implied(original, lits)  # noqa: E731
        valid = lambda ctx, z: dseq_valid(cur, ctx, z, escape=False)  # noqa: E731
        grow = cur.add
    for i, (kind, data) in enumerate(entries, start=1):
        if kind == "r":
            rep.resolvents_checked += 1
            if not implied_by_f(data):
                rep.failures.append(f"entry {i}: resolvent {list(data)} is not implied")
            grow(data)
        else:
            var, ctx, tag = data
            rep.dseqs_checked += 1
            if not escaped and not valid(ctx, {var}):
                rep.failures.append(f"entry {i}: {tag} D-sequent {sorted(ctx, key=abs)} -> x{var} fails")
    return rep
