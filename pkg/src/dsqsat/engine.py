"""The DS-QSAT search.

A node of the search receives the current partial assignment ``q`` and the
active D-sequents, and returns once every unassigned variable is redundant
in ``q``. Each node runs three phases:

1. termination checks and atomic D-sequents (falsified clause, monotone
   variables);
2. branching on an unassigned non-redundant variable, skipping the right
   branch when no left-branch D-sequent depends on it or when SRB applies;
3. merging the two branches: joining D-sequents that depend on the branch
   variable and deriving one for the branch variable itself.

Global SAT/UNSAT leaves the whole recursion through ``_Exit``. Recursion is
driven by an explicit stack of generators, so depth is bounded by memory
rather than the interpreter's recursion limit.
"""

from __future__ import annotations

import enum
import heapq
import time
from collections import deque
from dataclasses import asdict, dataclass, field, fields

from .dsequent import (
    FALSIFIED_CLAUSE,
    MONOTONE,
    SRB_BRANCH_VAR,
    DSeqStore,
    DSequent,
    context_le,
    cover_context,
    format_log_line,
    format_resolvent_line,
    join,
)
from .formula import DECISION, IMPLIED, Clause, Formula, PartialAssignment, cofactor, lit_var, make_lit, resolve
from .srb import branch_var_dseq, left_false_literal, recomp_dseqs, srb_applicable

LAZY = "lazy"
EAGER = "eager"
DEFAULT_ORDER = "default"
FORCED_ORDER = "forced"
COMMUNICATION_FIRST = "communication_first"

LEFT, RIGHT = "left", "right"


class Verdict(str, enum.Enum):
    SAT = "SAT"
    UNSAT = "UNSAT"


@dataclass
class SolverConfig:
    mode: str = LAZY
    srb_enabled: bool = True
    branch_order: str = DEFAULT_ORDER
    order: tuple[int, ...] = ()
    first_value: int = 0
    # re-verify counters, marks and the backtrack invariant at every node
    debug: bool = False

    def __post_init__(self) -> None:
        if self.mode not in (LAZY, EAGER):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.branch_order not in (DEFAULT_ORDER, FORCED_ORDER, COMMUNICATION_FIRST):
            raise ValueError(f"unknown branch order {self.branch_order!r}")
        if self.first_value not in (0, 1):
            raise ValueError("first_value must be 0 or 1")
        self.order = tuple(self.order)
        if len(set(self.order)) != len(self.order):
            raise ValueError("branch order lists a variable twice")
        if any(v < 1 for v in self.order):
            raise ValueError("branch order lists a non-positive variable")


@dataclass
class SearchStats:
    conflict_nodes: int = 0
    decisions: int = 0
    implications: int = 0
    max_conflict_vars_on_path: int = 0
    max_right_branch_vars: int = 0
    assigned_fraction_at_sat: float | None = None
    resolvents_added: int = 0
    dseqs_derived: int = 0
    tree_nodes: int = 0
    srb_skips: int = 0

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


@dataclass
class SolveResult:
    verdict: Verdict
    stats: SearchStats
    formula: Formula
    history: list[DSequent]
    resolvents: list[Clause]
    sat_assignment: dict[int, int] | None = None
    log: list[str] = field(default_factory=list)

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT


class _Exit(Exception):
    def __init__(self, verdict: Verdict):
        super().__init__(verdict.value)
        self.verdict = verdict


class InvariantError(AssertionError):
    pass


class BudgetExceeded(RuntimeError):
    """The search ran past its time limit; ``stats`` holds the counters so far."""

    def __init__(self, stats: SearchStats, seconds: float):
        super().__init__(f"search exceeded {seconds:g} s")
        self.stats = stats
        self.seconds = seconds


class Engine:
    def __init__(self, formula: Formula, config: SolverConfig | None = None, keep_log: bool = True):
        self.cfg = config or SolverConfig()
        self.f = formula.copy()
        n = self.f.num_vars
        self.n = n
        for v in self.cfg.order:
            if v > n:
                raise ValueError(f"branch order variable {v} exceeds {n}")
        self.q = PartialAssignment(n)
        self.store = DSeqStore(keep_history=keep_log)
        self.stats = SearchStats()
        self.log: list[str] | None = [] if keep_log else None
        self.resolvents: list[Clause] = []
        self.sat_assignment: dict[int, int] | None = None

        # per-clause counters, indexed by clause id (slot 0 unused)
        self.c_lits: list[tuple[int, ...]] = [()]
        self.n_sat = [0]
        self.n_false = [0]
        self.n_red = [0]
        self.occ: dict[int, list[int]] = {}
        self.live: dict[int, int] = {}
        for v in range(1, n + 1):
            self.occ[v], self.occ[-v] = [], []
            self.live[v] = self.live[-v] = 0
        self.n_falsified = 0
        self.empty_clause = False
        self.units: deque[int] = deque()

        self.free = set(range(1, n + 1))
        self.rank = self._ranks()
        self.heap = [(self.rank[v], v) for v in range(1, n + 1)]
        heapq.heapify(self.heap)
        self.mono = list(range(n, 0, -1))
        self.deferred: list[int] = []
        self.path_conflicts = 0
        self._conf_flags: list[bool] = []

        for c in self.f.clauses:
            self._attach(c)

    def _ranks(self) -> list[int]:
        n = self.n
        rank = list(range(n + 1))
        if self.cfg.branch_order in (FORCED_ORDER, COMMUNICATION_FIRST):
            for i, v in enumerate(self.cfg.order):
                rank[v] = i - len(self.cfg.order) - 1
        return rank

    # ---- clause bookkeeping -------------------------------------------------

    def _attach(self, c: Clause) -> None:
        cid = c.id
        lits = c.lits
        assert cid == len(self.c_lits)
        value = self.q.lit_value
        sat = sum(1 for l in lits if value(l) == 1)
        false = sum(1 for l in lits if value(l) == 0)
        red = sum(1 for l in lits if lit_var(l) in self.store.active)
        self.c_lits.append(lits)
        self.n_sat.append(sat)
        self.n_false.append(false)
        self.n_red.append(red)
        for l in lits:
            self.occ[l].append(cid)
        if sat == 0 and red == 0:
            for l in lits:
                self.live[l] += 1
        if not lits:
            self.empty_clause = True
        if false == len(lits):
            self.n_falsified += 1
        elif sat == 0 and red == 0 and false == len(lits) - 1:
            self.units.append(cid)

    def _kill(self, cid: int) -> None:
        live = self.live
        for l in self.c_lits[cid]:
            live[l] -= 1
            if live[l] == 0:
                self.mono.append(lit_var(l))

    def _revive(self, cid: int) -> None:
        live = self.live
        for l in self.c_lits[cid]:
            live[l] += 1

    def _assign(self, v: int, val: int, kind: str) -> list[int]:
        """Assign and return the ids of clauses this assignment falsified."""
        self.q.assign(v, val, kind)
        self.free.discard(v)
        t = make_lit(v, val)
        n_sat, n_false, n_red, c_lits = self.n_sat, self.n_false, self.n_red, self.c_lits
        for cid in self.occ[t]:
            s = n_sat[cid]
            n_sat[cid] = s + 1
            if s == 0 and n_red[cid] == 0:
                self._kill(cid)
        newly = []
        for cid in self.occ[-t]:
            nf = n_false[cid] + 1
            n_false[cid] = nf
            size = len(c_lits[cid])
            if nf == size:
                self.n_falsified += 1
                newly.append(cid)
            elif nf == size - 1 and n_sat[cid] == 0 and n_red[cid] == 0:
                self.units.append(cid)
        flag = bool(newly)
        self._conf_flags.append(flag)
        if flag:
            self.path_conflicts += 1
            if self.path_conflicts > self.stats.max_conflict_vars_on_path:
                self.stats.max_conflict_vars_on_path = self.path_conflicts
        return newly

    def _unassign(self) -> int:
        v, val, _ = self.q.pop()
        if self._conf_flags.pop():
            self.path_conflicts -= 1
        t = make_lit(v, val)
        n_sat, n_false, n_red, c_lits = self.n_sat, self.n_false, self.n_red, self.c_lits
        for cid in self.occ[t]:
            s = n_sat[cid] - 1
            n_sat[cid] = s
            if s == 0 and n_red[cid] == 0:
                self._revive(cid)
                if n_false[cid] == len(c_lits[cid]) - 1:
                    self.units.append(cid)
        for cid in self.occ[-t]:
            nf = n_false[cid]
            size = len(c_lits[cid])
            if nf == size:
                self.n_falsified -= 1
            n_false[cid] = nf - 1
            if nf - 1 == size - 1 and n_sat[cid] == 0 and n_red[cid] == 0:
                self.units.append(cid)
        self._make_free(v)
        return v

    def _make_free(self, v: int) -> None:
        self.free.add(v)
        heapq.heappush(self.heap, (self.rank[v], v))
        self.mono.append(v)

    def _mark(self, w: int) -> None:
        n_sat, n_red = self.n_sat, self.n_red
        for lit in (w, -w):
            for cid in self.occ[lit]:
                r = n_red[cid]
                n_red[cid] = r + 1
                if r == 0 and n_sat[cid] == 0:
                    self._kill(cid)

    def _unmark(self, w: int) -> None:
        n_sat, n_red, n_false, c_lits = self.n_sat, self.n_red, self.n_false, self.c_lits
        for lit in (w, -w):
            for cid in self.occ[lit]:
                r = n_red[cid] - 1
                n_red[cid] = r
                if r == 0 and n_sat[cid] == 0:
                    self._revive(cid)
                    if n_false[cid] == len(c_lits[cid]) - 1:
                        self.units.append(cid)

    def _is_unit(self, cid: int) -> bool:
        return self.n_sat[cid] == 0 and self.n_red[cid] == 0 and self.n_false[cid] == len(self.c_lits[cid]) - 1

    def _unit_with(self, lit: int) -> int | None:
        """A live clause that is unit on ``lit`` (its other literals false)."""
        for cid in self.occ[lit]:
            if self._is_unit(cid):
                return cid
        return None

    def redundant_clauses(self) -> set[int]:
        return {cid for cid in range(1, len(self.c_lits)) if self.n_red[cid] > 0}

    # ---- D-sequent bookkeeping ----------------------------------------------

    def _note(self, s: DSequent) -> None:
        self.stats.dseqs_derived += 1
        if self.log is not None:
            self.log.append(format_log_line(s))

    def _declare(self, s: DSequent) -> None:
        self.store.activate(s)
        self.free.discard(s.var)
        self._mark(s.var)
        self._note(s)

    def _release(self, v: int) -> DSequent:
        s = self.store.deactivate_var(v)
        self._unmark(v)
        self._make_free(v)
        return s

    def _swap(self, s: DSequent) -> None:
        self.store.replace(s)
        self._note(s)

    def _add_resolvent(self, c0: int, c1: int, v: int) -> Clause:
        lits, origin = resolve(self.f.clause(c0), self.f.clause(c1), v)
        c = self.f.add(lits, origin)
        self._attach(c)
        self.resolvents.append(c)
        self.stats.resolvents_added += 1
        if self.log is not None:
            self.log.append(format_resolvent_line(c.lits))
        return c

    # ---- phase 1 ------------------------------------------------------------

    def falsified_dseqs(self, cid: int) -> list[DSequent]:
        """D-sequents ``r -> {w}`` for every unassigned non-redundant ``w``,
        with ``r`` the part of ``q`` falsifying clause ``cid``."""
        ctx = self.q.restrict(lit_var(l) for l in self.c_lits[cid])
        out = []
        for w in sorted(self.free):
            s = DSequent(w, ctx, FALSIFIED_CLAUSE, clause=cid)
            self._declare(s)
            out.append(s)
        return out

    def update_dseqs(self, cid: int) -> list[DSequent]:
        """Left-branch conflict: lazy mode derives nothing, eager mode
        declares every free variable redundant."""
        if self.cfg.mode == LAZY:
            return []
        return self.falsified_dseqs(cid)

    def finish_dseqs(self, cid: int) -> list[DSequent]:
        return self.falsified_dseqs(cid)

    def monotone_context(self, v: int) -> frozenset[int]:
        """Context under which ``v`` is monotone in ``q``'s cofactor once
        clauses with redundant variables are removed."""
        lp, ln = self.live[v], self.live[-v]
        active = self.store.active
        if lp and ln:
            raise ValueError(f"x{v} is not monotone")
        if lp == 0 and ln == 0:
            a = cover_context([self.c_lits[c] for c in self.occ[v]], v, self.q, active)
            b = cover_context([self.c_lits[c] for c in self.occ[-v]], v, self.q, active)
            return a if len(a) <= len(b) else b
        side = v if lp == 0 else -v
        return cover_context([self.c_lits[c] for c in self.occ[side]], v, self.q, active)

    def monot_var_dseq(self, v: int) -> DSequent:
        s = DSequent(v, self.monotone_context(v), MONOTONE)
        self._declare(s)
        return s

    def _monotone_fixpoint(self) -> None:
        # Without a falsified clause, a monotone variable that is also the
        # free variable of a unit clause is left to propagation.
        conflict = self.n_falsified > 0
        cand = self.mono
        if self.deferred:
            cand.extend(self.deferred)
            self.deferred = []
        free, live = self.free, self.live
        while cand:
            v = cand.pop()
            if v not in free or (live[v] and live[-v]):
                continue
            if not conflict and (self._unit_with(v) or self._unit_with(-v)):
                self.deferred.append(v)
                continue
            self.monot_var_dseq(v)

    # ---- phase 2 ------------------------------------------------------------

    def pick_variable(self) -> tuple[int, int, str]:
        """Unit clauses first (value satisfying the clause), then the
        configured decision order with the configured first value."""
        units = self.units
        value = self.q.value
        while units:
            cid = units[0]
            if not self._is_unit(cid):
                units.popleft()
                continue
            lit = next(l for l in self.c_lits[cid] if value[lit_var(l)] == -1)
            v = lit_var(lit)
            val = 1 if lit > 0 else 0
            if self._unit_with(-lit) is not None:
                val = self.cfg.first_value
            return v, val, IMPLIED
        heap, free = self.heap, self.free
        while heap:
            v = heap[0][1]
            if v in free:
                return v, self.cfg.first_value, DECISION
            heapq.heappop(heap)
        raise ValueError("no unassigned non-redundant variable to pick")

    def _count(self, kind: str) -> None:
        if kind == DECISION:
            self.stats.decisions += 1
        else:
            self.stats.implications += 1

    # ---- phase 3 ------------------------------------------------------------

    def branch_var_dseq_at_merge(self, v: int, first_value: int) -> DSequent:
        """D-sequent for the (now unassigned) branch variable ``v``.

        If both values of ``v`` falsify a clause, the two clauses are resolved
        on ``v`` and the falsified resolvent justifies redundancy; otherwise
        ``v`` is monotone once redundant clauses are removed.
        """
        left_false = left_false_literal(v, first_value)
        c0 = self._unit_with(left_false)
        c1 = self._unit_with(-left_false) if c0 is not None else None
        if c0 is not None and c1 is not None:
            self.stats.conflict_nodes += 1
            c = self._add_resolvent(c0, c1, v)
            if not c.lits:
                raise _Exit(Verdict.UNSAT)
            s = DSequent(v, self.q.restrict(lit_var(l) for l in c.lits), FALSIFIED_CLAUSE, clause=c.id)
            self._declare(s)
            return s
        return self.monot_var_dseq(v)

    # ---- search -------------------------------------------------------------

    def _node(self, branch: str | None, var: int | None, newly: list[int]):
        st = self.stats
        st.tree_nodes += 1
        if newly:
            if branch == RIGHT:
                self.finish_dseqs(newly[0])
            else:
                self.update_dseqs(newly[0])
        self._monotone_fixpoint()
        if not self.free:
            if self.n_falsified == 0:
                self._sat()
            return

        v, val, kind = self.pick_variable()
        self._count(kind)
        yield LEFT, v, self._assign(v, val, kind)

        asym = sorted(self.store.dependents.get(v, ()))
        if not asym:
            self._unassign()
            self.branch_var_dseq_at_merge(v, val)
            return

        if self.cfg.srb_enabled and kind == DECISION:
            lf = left_false_literal(v, val)
            clauses = [self.c_lits[c] for c in self.occ[lf]]
            active = self.store.active
            if srb_applicable(v, val, True, self.q, clauses, active):
                sv = branch_var_dseq(v, val, self.q, clauses, active)
                recomputed = recomp_dseqs([active[w] for w in asym], v, val, sv.context)
                self._unassign()
                self._declare(sv)
                for s in recomputed:
                    self._swap(s)
                st.srb_skips += 1
                return

        saved = {w: self._release(w) for w in asym}
        self._unassign()
        self._count(kind)
        newly = self._assign(v, 1 - val, kind)
        if len(self.free) > st.max_right_branch_vars:
            st.max_right_branch_vars = len(self.free)
        yield RIGHT, v, newly
        self._unassign()

        for w in sorted(self.store.dependents.get(v, ())):
            self._swap(join(saved[w], self.store.active[w], v))
        self.branch_var_dseq_at_merge(v, val)

    def _sat(self) -> None:
        self.sat_assignment = self.q.as_dict()
        self.stats.assigned_fraction_at_sat = len(self.q) / self.n if self.n else 0.0
        raise _Exit(Verdict.SAT)

    def run(self, time_limit: float | None = None) -> SolveResult:
        deadline = None if time_limit is None else time.monotonic() + time_limit
        steps = 0
        try:
            if self.empty_clause:
                raise _Exit(Verdict.UNSAT)
            stack = [self._node(None, None, [])]
            while stack:
                try:
                    branch, v, newly = next(stack[-1])
                except StopIteration:
                    stack.pop()
                    if self.cfg.debug:
                        self.check_invariants(returned=True)
                    continue
                if self.cfg.debug:
                    self.check_invariants()
                steps += 1
                if deadline is not None and steps % 256 == 0 and time.monotonic() > deadline:
                    raise BudgetExceeded(self.stats, time_limit)
                stack.append(self._node(branch, v, newly))
            # the root returned: every variable is unconditionally redundant
            self._sat()
        except _Exit as e:
            verdict = e.verdict
        return SolveResult(
            verdict=verdict,
            stats=self.stats,
            formula=self.f,
            history=list(self.store.history),
            resolvents=list(self.resolvents),
            sat_assignment=self.sat_assignment,
            log=self.log if self.log is not None else [],
        )

    # ---- debugging ----------------------------------------------------------

    def check_invariants(self, returned: bool = False) -> None:
        """Recompute every incremental counter from scratch and compare."""
        q = self.q
        active = self.store.active
        for w, s in active.items():
            if w in q:
                raise InvariantError(f"redundant x{w} is assigned")
            if not context_le(s.context, q):
                raise InvariantError(f"D-sequent {s} inactive under {q}")
        falsified = 0
        live = {l: 0 for l in self.live}
        for cid in range(1, len(self.c_lits)):
            lits = self.c_lits[cid]
            sat = sum(1 for l in lits if q.lit_value(l) == 1)
            false = sum(1 for l in lits if q.lit_value(l) == 0)
            red = sum(1 for l in lits if lit_var(l) in active)
            if (sat, false, red) != (self.n_sat[cid], self.n_false[cid], self.n_red[cid]):
                raise InvariantError(f"stale counters for clause {cid}")
            falsified += false == len(lits)
            if sat == 0 and red == 0:
                for l in lits:
                    live[l] += 1
        if falsified != self.n_falsified:
            raise InvariantError("stale falsified-clause count")
        if live != self.live:
            raise InvariantError("stale live occurrence counts")
        free = {v for v in range(1, self.n + 1) if v not in q and v not in active}
        if free != self.free:
            raise InvariantError("stale free-variable set")
        if returned and free:
            raise InvariantError(f"node returned with non-redundant variables {sorted(free)}")


def solve(
    formula: Formula,
    config: SolverConfig | None = None,
    keep_log: bool = True,
    time_limit: float | None = None,
) -> SolveResult:
    return Engine(formula, config, keep_log).run(time_limit)


def ds_qsat(formula: Formula, config: SolverConfig | None = None) -> bool:
    return solve(formula, config, keep_log=False).sat


@dataclass
class AssignmentResult:
    verdict: Verdict
    assignment: dict[int, int] | None
    qsat_calls: int

    @property
    def sat(self) -> bool:
        return self.verdict is Verdict.SAT


def gen_sat_assgn(formula: Formula, config: SolverConfig | None = None) -> AssignmentResult:
    """Build a satisfying assignment with at most ``n + 1`` QSAT calls.

    Each variable in turn is tried at 0 by a fresh solver run on the cofactor;
    if that cofactor is unsatisfiable the variable must take value 1.
    """
    calls = 1
    if not ds_qsat(formula, config):
        return AssignmentResult(Verdict.UNSAT, None, calls)
    s: dict[int, int] = {}
    for v in range(1, formula.num_vars + 1):
        trial = dict(s)
        trial[v] = 0
        calls += 1
        s = trial if ds_qsat(cofactor(formula, trial), config) else {**s, v: 1}
    return AssignmentResult(Verdict.SAT, s, calls)


solve_with_assignment = gen_sat_assgn
