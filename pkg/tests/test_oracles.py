import itertools
import random

import pytest

from dsqsat.bench import random_cnf
from dsqsat.formula import Formula, evaluate
from dsqsat.oracles import (
    PointTable,
    OracleSizeError,
    brute_force_qsat,
    dseq_valid,
    implied,
    is_boundary_point,
    is_removable,
    removable_boundary_witness,
    satisfying_points,
)
from tests.conftest import DSEQ_EXAMPLE


def test_brute_force_examples(example1):
    assert brute_force_qsat(Formula.from_lists([[1, 2]]))
    assert not brute_force_qsat(Formula.from_lists([[1], [-1]]))
    assert brute_force_qsat(example1)
    assert brute_force_qsat(Formula(0))
    assert not brute_force_qsat(Formula.from_lists([[]], 0))


def test_brute_force_size_limit():
    with pytest.raises(OracleSizeError):
        brute_force_qsat(Formula(25))


def test_brute_force_matches_evaluate():
    rng = random.Random(3)
    for _ in range(200):
        f = random_cnf(rng, 7, 20)
        pts = [dict(zip(range(1, f.num_vars + 1), bits)) for bits in itertools.product((0, 1), repeat=f.num_vars)]
        sat = [p for p in pts if evaluate(f, p)]
        assert brute_force_qsat(f) == bool(sat)
        assert sorted(map(sorted, (p.items() for p in satisfying_points(f)))) == sorted(
            map(sorted, (p.items() for p in sat))
        )


def test_dseq_valid_examples():
    f = Formula.from_lists(DSEQ_EXAMPLE, 3)
    assert dseq_valid(f, {2: 1}, {1}, escape=False)
    assert dseq_valid(f, {1: 1, 3: 0}, {2}, escape=False)
    assert not dseq_valid(Formula.from_lists([[1], [-1]]), {}, {1})


def test_dseq_valid_escape_and_empty():
    # x2 is not redundant in (x1 v x2)(~x2) restricted by x1=0, but F is satisfiable
    f = Formula.from_lists([[1, 2], [-2]], 2)
    assert not dseq_valid(f, {1: 0}, {2}, escape=False)
    assert dseq_valid(f, {1: 0}, {2})
    rng = random.Random(4)
    for _ in range(50):
        assert dseq_valid(random_cnf(rng, 8, 20), {}, set())


def test_dseq_valid_rejects_overlap():
    with pytest.raises(ValueError):
        dseq_valid(Formula.from_lists([[1, 2]]), [1], {1})


def test_implied(example1):
    assert implied(example1, (1, 2))
    for c in example1.clauses:
        assert implied(example1, c)
    assert not implied(Formula.from_lists([[1]], 2), (2,))
    assert implied(Formula.from_lists([[1], [-1]]), ())


def test_boundary_point_examples():
    f = Formula.from_lists([[1]])
    assert is_boundary_point(f, {1: 0}, {1})
    assert not is_boundary_point(f, {1: 1}, {1})
    g = Formula.from_lists([[1, 3], [2]])
    assert not is_boundary_point(g, {1: 0, 2: 0, 3: 0}, {3})
    # not minimal: {3} alone covers the only falsified clause
    h = Formula.from_lists([[1, 3], [2, 3]])
    assert is_boundary_point(h, {1: 0, 2: 0, 3: 0}, {3})
    assert not is_boundary_point(Formula.from_lists([[3]], 3), {1: 0, 2: 0, 3: 0}, {1, 3})


def test_removable_examples():
    unsat = Formula.from_lists([[1, 2], [-1], [-2]])
    for bits in itertools.product((0, 1), repeat=2):
        p = dict(zip((1, 2), bits))
        assert is_removable(unsat, p, {1, 2})
    sat = Formula.from_lists([[1, 2], [-1]])
    for p in ({1: 0, 2: 0}, {1: 1, 2: 0}, {1: 1, 2: 1}):
        assert not is_removable(sat, p, {1, 2})
    assert not is_removable(Formula.from_lists([[1, 2]]), {1: 0, 2: 0}, {1})
    with pytest.raises(ValueError):
        is_removable(sat, {1: 0, 2: 1}, {1})


def test_witness_is_a_removable_boundary_point():
    rng = random.Random(9)
    found = 0
    for _ in range(200):
        f = random_cnf(rng, 8, 25)
        z = {rng.randint(1, f.num_vars)}
        w = removable_boundary_witness(f, {}, z)
        if w is None:
            continue
        p, zp = w
        assert zp <= z and is_boundary_point(f, p, zp)
        assert is_removable(f, p, range(1, f.num_vars + 1))
        found += 1
    assert found > 0


def test_point_table_matches_direct_oracles():
    rng = random.Random(11)
    for _ in range(150):
        f = random_cnf(rng, 9, 25)
        table = PointTable(f)
        picked = rng.sample(range(1, f.num_vars + 1), rng.randint(1, min(3, f.num_vars)))
        lits = [v if rng.random() < 0.5 else -v for v in picked]
        assert table.implies(lits) == implied(f, lits)
        vs = list(range(1, f.num_vars + 1))
        rng.shuffle(vs)
        nq = rng.randint(0, len(vs) - 1)
        ctx = [v if rng.random() < 0.5 else -v for v in vs[:nq]]
        z = {vs[nq]}
        for escape in (True, False):
            assert table.dseq_valid(ctx, z, escape) == dseq_valid(f, ctx, z, escape)
        extra = [rng.choice((1, -1)) * rng.randint(1, f.num_vars)]
        table.add_clause(extra)
        g = f.copy()
        g.add(extra)
        assert table.satisfiable(table.valid) == brute_force_qsat(g)
