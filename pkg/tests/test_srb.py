import random

import pytest

from dsqsat.bench import random_cnf
from dsqsat.dsequent import MONOTONE, SRB_BRANCH_VAR, SRB_RECOMPUTED, DSequent
from dsqsat.engine import SolverConfig, solve
from dsqsat.formula import PartialAssignment
from dsqsat.oracles import brute_force_qsat
from dsqsat.srb import branch_var_dseq, left_false_literal, recomp_dseqs, srb_applicable
from dsqsat.verify import replay_log


def ds(var, *lits):
    return DSequent(var, frozenset(lits), MONOTONE)


def test_left_false_literal():
    assert left_false_literal(4, 0) == 4
    assert left_false_literal(4, 1) == -4


def test_not_applicable_to_implied_variable():
    q = PartialAssignment.from_pairs([(2, 1), (1, 0)], 3)
    assert not srb_applicable(1, 0, False, q, [(1, 2)], {})
    assert srb_applicable(1, 0, True, q, [(1, 2)], {})


def test_applicable_when_satisfied_or_covered():
    q = PartialAssignment.from_pairs([(2, 1), (1, 0)], 4)
    ds0 = {3: ds(3, -1)}
    assert srb_applicable(1, 0, True, q, [(1, 2), (1, -4, 3)], ds0)
    assert not srb_applicable(1, 0, True, q, [(1, 2), (1, 4)], ds0)


def test_branch_var_dseq_cases():
    q = PartialAssignment.from_pairs([(2, 1), (5, 0), (1, 0)], 6)
    s = branch_var_dseq(1, 0, q, [(1, 2), (1, 2, 3)], {})
    assert s.context == frozenset({2}) and s.tag == SRB_BRANCH_VAR
    s = branch_var_dseq(1, 0, q, [(1, 4)], {4: ds(4, -5)})
    assert s.context == frozenset({-5})
    # a left-branch D-sequent may rely on the left value of the branch variable
    s = branch_var_dseq(1, 0, q, [(1, 2), (1, 4)], {4: ds(4, -5, -1)})
    assert s.context == frozenset({2, -5})


def test_recomp():
    out = recomp_dseqs([ds(7, 3, -1), ds(8, 3)], 1, 0, frozenset({-5}))
    assert out[0].context == frozenset({3, -5}) and out[0].tag == SRB_RECOMPUTED
    assert out[1].context == frozenset({3}) and out[1].tag == MONOTONE
    assert recomp_dseqs([ds(7, 3, 1)], 1, 1, frozenset({2}))[0].context == frozenset({3, 2})
    with pytest.raises(ValueError):
        recomp_dseqs([ds(7, 1)], 1, 0, frozenset())


@pytest.mark.parametrize("first_value", [0, 1])
def test_srb_dseqs_valid_on_unsat_instances(first_value):
    """On unsatisfiable formulas the redundancy escape never applies, so SRB
    results must be plainly valid."""
    rng = random.Random(20 + first_value)
    checked = 0
    while checked < 40:
        f = random_cnf(rng, 10, 40)
        if brute_force_qsat(f):
            continue
        res = solve(f, SolverConfig(first_value=first_value))
        assert not res.sat
        rep = replay_log(f, res.log, escape=False)
        assert rep.ok, rep.failures
        checked += sum(s.tag in (SRB_BRANCH_VAR, SRB_RECOMPUTED) for s in res.history)
