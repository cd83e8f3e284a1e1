import random

import pytest

from dsqsat.bench import compositional, random_cnf
from dsqsat.dsequent import FALSIFIED_CLAUSE, JOINED, MONOTONE, DSequent
from dsqsat.engine import (
    DECISION,
    IMPLIED,
    BudgetExceeded,
    Engine,
    SolverConfig,
    Verdict,
    gen_sat_assgn,
    solve,
)
from dsqsat.formula import Formula, evaluate
from tests.conftest import DSEQ_EXAMPLE

GOLDEN = SolverConfig(mode="lazy", srb_enabled=False, branch_order="forced", order=(1, 2, 3, 4, 5))


def ctx(*lits):
    return frozenset(lits)


def test_golden_trace(example1):
    res = solve(example1, GOLDEN)
    assert res.verdict is Verdict.SAT
    assert res.sat_assignment == {1: 0, 2: 1, 3: 1}
    got = [(s.var, s.context) for s in res.history]
    assert got == [
        (5, ctx(-1, -4)),  # S1
        (5, ctx(-1, 4)),  # S2
        (5, ctx(-1)),  # S3
        (4, ctx(-1)),  # S4
        (3, ctx(-1, -2)),  # S5
    ]
    assert [s.tag for s in res.history] == [MONOTONE, MONOTONE, JOINED, MONOTONE, FALSIFIED_CLAUSE]
    assert [sorted(c.lits) for c in res.resolvents] == [[1, 2]]
    assert res.resolvents[0].origin == (3, 4, 3)
    assert res.history[4].clause == res.resolvents[0].id == 9
    st = res.stats
    assert (st.conflict_nodes, st.resolvents_added, st.dseqs_derived) == (1, 1, 5)
    assert st.assigned_fraction_at_sat == pytest.approx(3 / 5)
    assert res.log[4] == "r 1 2 0"


def test_golden_trace_lazy_branches_past_conflict(example1):
    # S1 is derived at (x1=0,x2=0,x3=0,x4=0), where C3 is already falsified
    res = solve(example1, GOLDEN)
    assert res.history[0].context == ctx(-1, -4)
    assert res.stats.max_conflict_vars_on_path == 1


def test_golden_trace_with_srb(example1):
    cfg = SolverConfig(branch_order="forced", order=(1, 2, 3, 4, 5))
    res = solve(example1, cfg)
    assert res.sat_assignment == {1: 0, 2: 1, 3: 1}
    assert res.stats.srb_skips == 1 and res.stats.conflict_nodes == 1
    assert [sorted(c.lits) for c in res.resolvents] == [[1, 2]]


def test_unsat_pair():
    res = solve(Formula.from_lists([[1], [-1]]))
    assert res.verdict is Verdict.UNSAT
    assert [c.lits for c in res.resolvents] == [()]
    assert res.stats.conflict_nodes == 1
    assert res.stats.assigned_fraction_at_sat is None


def test_zero_clauses_is_sat_at_root():
    res = solve(Formula(3))
    assert res.sat and res.stats.tree_nodes == 1 and res.stats.decisions == 0
    assert res.sat_assignment == {}
    assert all(s.context == frozenset() for s in res.history)


def test_empty_clause_in_input():
    res = solve(Formula.from_lists([[1, 2], []], 2))
    assert res.verdict is Verdict.UNSAT and res.stats.tree_nodes == 0


def _engine_at(f, pairs, cfg=None):
    e = Engine(f, cfg)
    for v, b in pairs:
        e._assign(v, b, DECISION)
    return e


def test_pick_variable(example1):
    e = _engine_at(example1, [(1, 0), (2, 1)])
    assert e.pick_variable() == (3, 1, IMPLIED)
    e = Engine(example1, GOLDEN)
    assert e.pick_variable() == (1, 0, DECISION)
    # x3 and ~x3 both unit: x3 picked with the configured first value
    e = _engine_at(example1, [(1, 0), (2, 0)])
    assert e.pick_variable() == (3, 0, IMPLIED)


def test_pick_variable_respects_forced_order(example1):
    e = Engine(example1, SolverConfig(branch_order="forced", order=(4, 2), first_value=1))
    assert e.pick_variable() == (4, 1, DECISION)


def test_update_dseqs_lazy_and_eager(example1):
    e = _engine_at(example1, [(1, 0), (2, 0), (3, 0)])
    assert e.update_dseqs(3) == []
    e = _engine_at(example1, [(1, 0), (2, 0), (3, 0)], SolverConfig(mode="eager"))
    out = e.update_dseqs(3)
    assert [(s.var, s.context) for s in out] == [(4, ctx(-1, -2, -3)), (5, ctx(-1, -2, -3))]
    f = Formula.from_lists([[-1], [1, 2]], 3)
    e = _engine_at(f, [(1, 1), (2, 0)], SolverConfig(mode="eager"))
    assert all(s.context == ctx(1) for s in e.update_dseqs(1))


def test_finish_dseqs():
    f = Formula.from_lists([[-1], [2, 3]], 3)
    e = _engine_at(f, [(1, 1)])
    out = e.finish_dseqs(1)
    assert [(s.var, s.context) for s in out] == [(2, ctx(1)), (3, ctx(1))]
    assert e.finish_dseqs(1) == []


def test_monotone_dseqs(example1):
    e = _engine_at(example1, [(1, 0), (2, 0), (3, 0), (4, 0)])
    assert e.monot_var_dseq(5).context == ctx(-1, -4)
    e2 = _engine_at(example1, [(1, 0), (2, 0), (3, 0)])
    e2._declare(DSequent(5, ctx(-1), JOINED))
    assert e2.monot_var_dseq(4).context == ctx(-1)
    g = Formula.from_lists(DSEQ_EXAMPLE, 3)
    e3 = _engine_at(g, [(2, 1)])
    assert e3.monot_var_dseq(1).context == ctx(2)
    with pytest.raises(ValueError):
        _engine_at(example1, []).monot_var_dseq(4)


def test_budget():
    f = compositional(60, seed=3).formula
    with pytest.raises(BudgetExceeded) as exc:
        solve(f, SolverConfig(mode="eager"), keep_log=False, time_limit=0.0)
    assert exc.value.stats.tree_nodes > 0


@pytest.mark.parametrize(
    "kwargs",
    [
        {"mode": "greedy"},
        {"branch_order": "random"},
        {"first_value": 2},
        {"order": (1, 1)},
        {"order": (0,)},
    ],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SolverConfig(**kwargs)


def test_order_beyond_num_vars(example1):
    with pytest.raises(ValueError):
        solve(example1, SolverConfig(branch_order="forced", order=(9,)))


@pytest.mark.parametrize("mode", ["lazy", "eager"])
@pytest.mark.parametrize("srb", [True, False])
@pytest.mark.parametrize("first_value", [0, 1])
def test_debug_invariants_hold(mode, srb, first_value):
    rng = random.Random(hash((mode, srb, first_value)) & 0xFFFF)
    cfg = SolverConfig(mode=mode, srb_enabled=srb, first_value=first_value, debug=True)
    for _ in range(150):
        solve(random_cnf(rng, 10, 35), cfg)


def test_eager_never_branches_past_a_conflict():
    rng = random.Random(5)
    for _ in range(300):
        res = solve(random_cnf(rng, 12, 40), SolverConfig(mode="eager"), keep_log=False)
        assert res.stats.max_conflict_vars_on_path <= 1


def test_gen_sat_assgn_examples(example1):
    r = gen_sat_assgn(Formula.from_lists([[1], [-1]]))
    assert r.verdict is Verdict.UNSAT and r.qsat_calls == 1
    r = gen_sat_assgn(Formula.from_lists([[1, 2]]))
    assert r.sat and evaluate(Formula.from_lists([[1, 2]]), r.assignment) and r.qsat_calls <= 3
    r = gen_sat_assgn(example1)
    assert r.sat and evaluate(example1, r.assignment) and r.qsat_calls <= 6


def test_stats_json_fields(example1):
    d = solve(example1).stats.as_dict()
    for name in (
        "conflict_nodes",
        "decisions",
        "implications",
        "max_conflict_vars_on_path",
        "max_right_branch_vars",
        "assigned_fraction_at_sat",
        "resolvents_added",
        "dseqs_derived",
        "tree_nodes",
    ):
        assert name in d
