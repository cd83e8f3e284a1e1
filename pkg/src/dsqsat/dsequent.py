"""Dependency sequents: records ``r -> {v}`` stating that ``v`` is redundant
in the subspace ``r``, plus the join rule and the active store.

A context ``r`` is a frozenset of literals (``-3`` means ``x3=0``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .formula import Literal, PartialAssignment, context_le, lit_var

FALSIFIED_CLAUSE = "falsified_clause"
MONOTONE = "monotone"
JOINED = "joined"
SRB_BRANCH_VAR = "srb_branch_var"
SRB_RECOMPUTED = "srb_recomputed"

TAGS = (FALSIFIED_CLAUSE, MONOTONE, JOINED, SRB_BRANCH_VAR, SRB_RECOMPUTED)


@dataclass(eq=False, slots=True)
class DSequent:
    var: int
    context: frozenset[Literal]
    tag: str
    clause: int | None = None
    parents: tuple[int, ...] = ()
    pivot: int | None = None
    id: int = -1

    def __post_init__(self) -> None:
        if self.var in self.context or -self.var in self.context:
            raise ValueError(f"context of D-sequent for x{self.var} assigns x{self.var}")

    @property
    def context_vars(self) -> frozenset[int]:
        return frozenset(lit_var(l) for l in self.context)

    def key(self) -> tuple[frozenset[Literal], int]:
        """Content identity: context and redundant variable."""
        return self.context, self.var

    def depends_on(self, var: int) -> bool:
        return var in self.context or -var in self.context

    def __str__(self) -> str:
        ctx = ",".join(f"x{lit_var(l)}={int(l > 0)}" for l in sorted(self.context, key=lit_var))
        return f"({ctx}) -> {{x{self.var}}}"


def is_active(s: DSequent, q: PartialAssignment) -> bool:
    return context_le(s.context, q)


def join(s0: DSequent, s1: DSequent, v: int) -> DSequent:
    """Join two D-sequents for the same variable at ``v``.

    The contexts must assign ``v`` opposite values and agree everywhere else.
    """
    if s0.var != s1.var:
        raise ValueError(f"cannot join D-sequents for x{s0.var} and x{s1.var}")
    if not ((v in s0.context and -v in s1.context) or (-v in s0.context and v in s1.context)):
        raise ValueError(f"contexts do not assign x{v} opposite values")
    merged = (s0.context | s1.context) - {v, -v}
    clash = [l for l in merged if -l in merged]
    if clash:
        raise ValueError(f"contexts also disagree on x{lit_var(clash[0])}")
    return DSequent(s0.var, merged, JOINED, parents=(s0.id, s1.id), pivot=v)


def partition_on(ds: Iterable[DSequent], v: int) -> tuple[list[DSequent], list[DSequent]]:
    """Split into (symmetric, asymmetric) D-sequents with respect to ``v``."""
    sym, asym = [], []
    for s in ds:
        (asym if s.depends_on(v) else sym).append(s)
    return sym, asym


@dataclass
class DSeqStore:
    """At most one active D-sequent per variable, plus the full history.

    ``dependents[u]`` holds the variables whose active D-sequent has ``u`` in
    its context; it makes partitioning on a branch variable proportional to
    the number of asymmetric D-sequents.
    """

    active: dict[int, DSequent] = field(default_factory=dict)
    history: list[DSequent] = field(default_factory=list)
    dependents: dict[int, set[int]] = field(default_factory=dict)
    keep_history: bool = True
    derived: int = 0

    def _record(self, s: DSequent) -> None:
        s.id = self.derived
        self.derived += 1
        if self.keep_history:
            self.history.append(s)

    def _link(self, s: DSequent) -> None:
        for l in s.context:
            self.dependents.setdefault(lit_var(l), set()).add(s.var)

    def _unlink(self, s: DSequent) -> None:
        for l in s.context:
            self.dependents[lit_var(l)].discard(s.var)

    def activate(self, s: DSequent) -> DSequent:
        if s.var in self.active:
            raise ValueError(f"x{s.var} already has an active D-sequent")
        self._record(s)
        self.active[s.var] = s
        self._link(s)
        return s

    def deactivate_var(self, v: int) -> DSequent:
        s = self.active.pop(v)
        self._unlink(s)
        return s

    def replace(self, s: DSequent) -> DSequent:
        """Swap in a new D-sequent for an already redundant variable."""
        self._unlink(self.active.pop(s.var))
        self._record(s)
        self.active[s.var] = s
        self._link(s)
        return s

    def is_redundant(self, v: int) -> bool:
        return v in self.active

    def depending_on(self, v: int) -> list[DSequent]:
        return [self.active[w] for w in sorted(self.dependents.get(v, ()))]

    def __iter__(self) -> Iterator[DSequent]:
        return iter(self.active.values())

    def __len__(self) -> int:
        return len(self.active)


def format_log_line(s: DSequent) -> str:
    lits = sorted(s.context, key=lit_var)
    body = " ".join(map(str, lits))
    return f"d {s.var} {body + ' ' if body else ''}0 {s.tag}"


def format_resolvent_line(lits: Iterable[Literal]) -> str:
    body = " ".join(map(str, lits))
    return f"r {body + ' ' if body else ''}0"


def parse_log(text: str) -> list[tuple[str, object]]:
    """Parse a derivation log into ``("d", (var, context, tag))`` and
    ``("r", lits)`` entries."""
    out: list[tuple[str, object]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        try:
            if parts[0] == "d":
                var = int(parts[1])
                end = parts.index("0", 2)
                ctx = frozenset(int(t) for t in parts[2:end])
                tag = parts[end + 1]
                if tag not in TAGS:
                    raise ValueError(f"unknown tag {tag!r}")
                out.append(("d", (var, ctx, tag)))
            elif parts[0] == "r":
                end = parts.index("0", 1)
                out.append(("r", tuple(int(t) for t in parts[1:end])))
            else:
                raise ValueError(f"unknown record {parts[0]!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"derivation log line {lineno}: {exc}") from None
    return out


def cover_context(
    clauses: Iterable[Iterable[Literal]],
    skip: int,
    q: PartialAssignment,
    active: dict[int, DSequent],
) -> frozenset[Literal]:
    """Smallest-effort assignment under which every clause is removed.

    Each clause must be satisfied by ``q`` or contain a variable (other than
    ``skip``) with an active D-sequent. A satisfying assignment is preferred,
    the earliest-assigned one if several; otherwise the redundant variable
    whose context is smallest. Literals of ``skip`` are dropped from the
    result.
    """
    ctx: set[Literal] = set()
    pos = q.pos
    for c in clauses:
        best_lit = None
        best_pos = None
        best_ds = None
        for l in c:
            var = lit_var(l)
            if var == skip:
                continue
            val = q.lit_value(l)
            if val == 1:
                if best_pos is None or pos[var] < best_pos:
                    best_lit, best_pos = l, pos[var]
            elif val == -1 and best_lit is None:
                s = active.get(var)
                if s is not None and (best_ds is None or len(s.context) < len(best_ds.context)):
                    best_ds = s
        if best_lit is not None:
            ctx.add(best_lit)
        elif best_ds is not None:
            ctx.update(best_ds.context)
        else:
            raise ValueError(f"clause {list(c)} is neither satisfied nor covered by a redundant variable")
    ctx.discard(skip)
    ctx.discard(-skip)
    return frozenset(ctx)
