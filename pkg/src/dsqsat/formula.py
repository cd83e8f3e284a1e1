"""CNF formulas, partial assignments, DIMACS I/O and resolution.

Literals are DIMACS-style signed integers: ``v`` is the positive literal of
variable ``v`` and ``-v`` its negation. A partial assignment is viewed as the
set of literals it makes true, so ``(x1=0, x4=1)`` is ``{-1, 4}``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

Literal = int

DECISION = "decision"
IMPLIED = "implied"


class DimacsError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def lit_var(lit: Literal) -> int:
    return lit if lit > 0 else -lit


def make_lit(var: int, value: int) -> Literal:
    """Literal made true by assigning ``value`` to ``var``."""
    return var if value else -var


@dataclass(frozen=True)
class Clause:
    """A clause with a stable id.

    ``origin`` is ``None`` for input clauses and ``(parent0, parent1, pivot)``
    for resolvents.
    """

    id: int
    lits: tuple[Literal, ...]
    origin: tuple[int, int, int] | None = None

    @property
    def vars(self) -> frozenset[int]:
        return frozenset(lit_var(l) for l in self.lits)

    @property
    def is_resolvent(self) -> bool:
        return self.origin is not None

    def __len__(self) -> int:
        return len(self.lits)

    def __iter__(self) -> Iterator[Literal]:
        return iter(self.lits)


def normalize(lits: Iterable[Literal]) -> tuple[Literal, ...] | None:
    """Drop duplicate literals; return ``None`` for a tautology."""
    out = tuple(dict.fromkeys(lits))
    seen = set(out)
    if any(-l in seen for l in out):
        return None
    return out


@dataclass
class Formula:
    """A CNF formula whose clause ids are ``1..len(clauses)``.

    Clauses are never removed, so an id stays valid for the formula's
    lifetime; resolvents get the next free id.
    """

    num_vars: int
    clauses: list[Clause] = field(default_factory=list)
    dropped_tautologies: int = 0
    comment_lines: int = 0

    def add(self, lits: Iterable[Literal], origin: tuple[int, int, int] | None = None) -> Clause:
        norm = normalize(lits)
        if norm is None:
            raise ValueError(f"tautological clause {list(lits)}")
        for l in norm:
            if l == 0 or lit_var(l) > self.num_vars:
                raise ValueError(f"literal {l} out of range 1..{self.num_vars}")
        c = Clause(len(self.clauses) + 1, norm, origin)
        self.clauses.append(c)
        return c

    def clause(self, cid: int) -> Clause:
        return self.clauses[cid - 1]

    def __len__(self) -> int:
        return len(self.clauses)

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    @classmethod
    def from_lists(cls, clauses: Iterable[Iterable[Literal]], num_vars: int | None = None) -> Formula:
        clauses = [list(c) for c in clauses]
        if num_vars is None:
            num_vars = max((lit_var(l) for c in clauses for l in c), default=0)
        f = cls(num_vars)
        for c in clauses:
            f.add(c)
        return f

    def copy(self) -> Formula:
        return Formula(self.num_vars, list(self.clauses), self.dropped_tautologies, self.comment_lines)

    def as_lists(self) -> list[list[Literal]]:
        return [list(c.lits) for c in self.clauses]

    def same_clauses(self, other: Formula) -> bool:
        """Equality up to clause ids and origins."""
        return self.num_vars == other.num_vars and [set(c.lits) for c in self] == [set(c.lits) for c in other]

    def has_empty_clause(self) -> bool:
        return any(not c.lits for c in self.clauses)

    def clauses_with(self, zvars: Iterable[int]) -> list[Clause]:
        """The clauses containing at least one variable of ``zvars``."""
        z = set(zvars)
        return [c for c in self.clauses if any(lit_var(l) in z for l in c.lits)]

    def used_vars(self) -> set[int]:
        return {lit_var(l) for c in self.clauses for l in c.lits}


class PartialAssignment:
    """Chronologically ordered assignment with O(1) lookup.

    ``value[v]`` is -1 for unassigned variables. Each trail entry is
    ``(var, value, kind)`` with kind ``"decision"`` or ``"implied"``.
    """

    __slots__ = ("num_vars", "value", "pos", "trail")

    def __init__(self, num_vars: int):
        self.num_vars = num_vars
        self.value = [-1] * (num_vars + 1)
        self.pos = [-1] * (num_vars + 1)
        self.trail: list[tuple[int, int, str]] = []

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]], num_vars: int | None = None) -> PartialAssignment:
        pairs = list(pairs)
        if num_vars is None:
            num_vars = max((v for v, _ in pairs), default=0)
        q = cls(num_vars)
        for v, val in pairs:
            q.assign(v, val)
        return q

    @classmethod
    def from_literals(cls, lits: Iterable[Literal], num_vars: int | None = None) -> PartialAssignment:
        return cls.from_pairs(((lit_var(l), int(l > 0)) for l in lits), num_vars)

    def assign(self, var: int, value: int, kind: str = DECISION) -> None:
        if self.value[var] != -1:
            raise ValueError(f"variable {var} assigned twice")
        self.value[var] = 1 if value else 0
        self.pos[var] = len(self.trail)
        self.trail.append((var, self.value[var], kind))

    def pop(self) -> tuple[int, int, str]:
        entry = self.trail.pop()
        self.value[entry[0]] = -1
        self.pos[entry[0]] = -1
        return entry

    def get(self, var: int) -> int | None:
        val = self.value[var] if var <= self.num_vars else -1
        return None if val == -1 else val

    def __contains__(self, var: int) -> bool:
        return var <= self.num_vars and self.value[var] != -1

    def __len__(self) -> int:
        return len(self.trail)

    def lit_value(self, lit: Literal) -> int:
        """1 if ``lit`` is true under the assignment, 0 if false, -1 if unassigned."""
        var = lit_var(lit)
        val = self.value[var] if var <= self.num_vars else -1
        if val == -1:
            return -1
        return val if lit > 0 else 1 - val

    def assigned_vars(self) -> set[int]:
        return {v for v, _, _ in self.trail}

    def literals(self) -> frozenset[Literal]:
        return frozenset(make_lit(v, val) for v, val, _ in self.trail)

    def as_dict(self) -> dict[int, int]:
        return {v: val for v, val, _ in self.trail}

    def restrict(self, vars_: Iterable[int]) -> frozenset[Literal]:
        """The sub-assignment of this one to ``vars_``, as a literal set."""
        return frozenset(make_lit(v, self.value[v]) for v in vars_ if self.value[v] != -1)

    def __le__(self, other: PartialAssignment) -> bool:
        return all(other.get(v) == val for v, val, _ in self.trail)

    def __repr__(self) -> str:
        inner = ",".join(f"x{v}={val}" for v, val, _ in self.trail)
        return f"PartialAssignment({inner})"


def context_le(ctx: Iterable[Literal], q: PartialAssignment) -> bool:
    """True iff every assignment of ``ctx`` also appears in ``q``."""
    return all(q.lit_value(l) == 1 for l in ctx)


class Status(enum.Enum):
    SATISFIED = "satisfied"
    FALSIFIED = "falsified"
    UNIT = "unit"
    UNRESOLVED = "unresolved"


def clause_status(c: Clause | Sequence[Literal], q: PartialAssignment) -> tuple[Status, Literal | None]:
    """Status of a clause under ``q``; the literal is set only for UNIT."""
    free: list[Literal] = []
    for l in c:
        val = q.lit_value(l)
        if val == 1:
            return Status.SATISFIED, None
        if val == -1:
            free.append(l)
    if not free:
        return Status.FALSIFIED, None
    if len(free) == 1:
        return Status.UNIT, free[0]
    return Status.UNRESOLVED, None


def resolve(c0: Clause, c1: Clause, v: int) -> tuple[tuple[Literal, ...], tuple[int, int, int]]:
    """Resolve two clauses on ``v``.

    Returns the resolvent's literals and its origin record; add it to a
    formula with ``Formula.add(lits, origin)`` to give it an id.
    """
    s0, s1 = set(c0.lits), set(c1.lits)
    if v in s0 and -v in s1:
        pass
    elif -v in s0 and v in s1:
        pass
    else:
        raise ValueError(f"clauses {c0.id} and {c1.id} do not clash on variable {v}")
    lits = [l for l in c0.lits if lit_var(l) != v] + [l for l in c1.lits if lit_var(l) != v]
    norm = normalize(lits)
    if norm is None:
        raise ValueError(f"resolvent of {c0.id} and {c1.id} on {v} is tautological")
    return norm, (c0.id, c1.id, v)


def _point_value(p: Mapping[int, int] | Sequence[int] | PartialAssignment, var: int) -> int | None:
    if isinstance(p, PartialAssignment):
        return p.get(var)
    if isinstance(p, Mapping):
        val = p.get(var)
    else:
        val = p[var] if var < len(p) else None
    return None if val is None or val == -1 else int(bool(val))


def evaluate(f: Formula, p: Mapping[int, int] | PartialAssignment) -> bool:
    """True iff the complete assignment ``p`` satisfies every clause of ``f``."""
    vals = {}
    for v in range(1, f.num_vars + 1):
        val = _point_value(p, v)
        if val is None:
            raise ValueError(f"assignment does not assign variable {v}")
        vals[v] = val
    return all(any(vals[lit_var(l)] == (l > 0) for l in c.lits) for c in f.clauses)


def cofactor(f: Formula, q: PartialAssignment | Mapping[int, int]) -> Formula:
    """F|q: drop clauses satisfied by q and literals falsified by q."""
    if not isinstance(q, PartialAssignment):
        q = PartialAssignment.from_pairs(q.items(), f.num_vars)
    g = Formula(f.num_vars)
    for c in f.clauses:
        st, _ = clause_status(c, q)
        if st is Status.SATISFIED:
            continue
        g.add([l for l in c.lits if q.lit_value(l) != 0])
    return g


def parse_dimacs(text: str | bytes) -> Formula:
    if isinstance(text, bytes):
        text = text.decode()
    f: Formula | None = None
    current: list[int] = []
    comments = 0
    dropped = 0
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        last_line = lineno
        if not line:
            continue
        if line.startswith("c"):
            comments += 1
            continue
        if line.startswith("p"):
            parts = line.split()
            if f is not None:
                raise DimacsError("duplicate header", lineno)
            if len(parts) != 4 or parts[1] != "cnf":
                raise DimacsError(f"malformed header {line!r}", lineno)
            try:
                nv, nc = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError(f"malformed header {line!r}", lineno) from None
            if nv < 0 or nc < 0:
                raise DimacsError(f"malformed header {line!r}", lineno)
            f = Formula(nv)
            continue
        if line.startswith("%"):
            break
        if f is None:
            raise DimacsError("clause before header", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise DimacsError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                norm = normalize(current)
                if norm is None:
                    dropped += 1
                else:
                    f.add(norm)
                current = []
            elif lit_var(lit) > f.num_vars:
                raise DimacsError(f"literal {lit} exceeds {f.num_vars} variables", lineno)
            else:
                current.append(lit)
    if f is None:
        raise DimacsError("missing 'p cnf' header", last_line or None)
    if current:
        raise DimacsError("last clause not terminated by 0", last_line)
    f.dropped_tautologies = dropped
    f.comment_lines = comments
    return f


def emit_dimacs(f: Formula) -> str:
    out = [f"p cnf {f.num_vars} {len(f.clauses)}\n"]
    for c in f.clauses:
        out.append(" ".join(map(str, c.lits)) + (" 0\n" if c.lits else "0\n"))
    return "".join(out)


def read_dimacs(path: str) -> Formula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())


def write_dimacs(f: Formula, path: str) -> None:
    with open(path, "w") as fh:
        fh.write(emit_dimacs(f))
