"""Skipping right branches.

After the left branch of a decision variable ``v`` returns, the right branch
can be replaced by two derived facts when every clause with the literal of
``v`` that the left branch falsifies is satisfied by ``q`` or holds a
variable made redundant in the left branch:

* a D-sequent ``r -> {v}`` built from those clauses, and
* for each left-branch D-sequent ``e -> {w}`` that depends on ``v``, the
  D-sequent ``(e minus the left assignment of v) + r -> {w}``.

With the left value 1 instead of 0 the construction is mirrored.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from .dsequent import SRB_BRANCH_VAR, SRB_RECOMPUTED, DSequent, cover_context
from .formula import Literal, PartialAssignment, lit_var, make_lit


def left_false_literal(v: int, first_value: int) -> Literal:
    """The literal of ``v`` falsified by the left-branch assignment."""
    return -make_lit(v, first_value)


def srb_applicable(
    v: int,
    first_value: int,
    is_decision: bool,
    q: PartialAssignment,
    clauses: Iterable[Iterable[Literal]],
    ds0: Mapping[int, DSequent],
) -> bool:
    """``clauses`` are the clauses containing ``left_false_literal(v, ...)``;
    ``ds0`` maps variables to their D-sequents active after the left branch."""
    if not is_decision:
        return False
    for c in clauses:
        ok = False
        for l in c:
            var = lit_var(l)
            if var == v:
                continue
            if q.lit_value(l) == 1 or (var not in q and var in ds0):
                ok = True
                break
        if not ok:
            return False
    return True


def branch_var_dseq(
    v: int,
    first_value: int,
    q: PartialAssignment,
    clauses: Iterable[Iterable[Literal]],
    ds0: Mapping[int, DSequent],
) -> DSequent:
    ctx = cover_context(clauses, v, q, dict(ds0))
    return DSequent(v, ctx, SRB_BRANCH_VAR)


def recomp_dseqs(asym: Iterable[DSequent], v: int, first_value: int, r_v: frozenset[Literal]) -> list[DSequent]:
    """Replace the left assignment of ``v`` in each context by ``r_v``.

    D-sequents that do not depend on ``v`` are returned unchanged.
    """
    left = make_lit(v, first_value)
    out = []
    for s in asym:
        if left not in s.context:
            if -left in s.context:
                raise ValueError(f"D-sequent for x{s.var} assigns x{v} the right-branch value")
            out.append(s)
            continue
        ctx = (s.context - {left}) | r_v
        out.append(DSequent(s.var, ctx, SRB_RECOMPUTED, parents=(s.id,), pivot=v))
    return out
