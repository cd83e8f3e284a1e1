"""Brute-force ground truth for small formulas.

Points are enumerated in chunks as integer indices; bit ``i`` of an index is
the value of the ``i``-th enumerated variable. Everything here is exponential
by design and guarded by size limits.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import Clause, Formula, Literal, PartialAssignment, cofactor, lit_var

MAX_QSAT_VARS = 24
MAX_DSEQ_VARS = 20
MAX_POINT_VARS = 20
_CHUNK_BITS = 16


class OracleSizeError(ValueError):
    pass


def _check_size(n: int, limit: int, what: str) -> None:
    if n > limit:
        raise OracleSizeError(f"{what}: {n} variables exceeds the oracle limit of {limit}")


def _lits(c: Clause | Iterable[Literal]) -> tuple[Literal, ...]:
    return c.lits if isinstance(c, Clause) else tuple(c)


def _as_dict(p: Mapping[int, int] | PartialAssignment | None) -> dict[int, int]:
    if p is None:
        return {}
    if isinstance(p, PartialAssignment):
        return p.as_dict()
    return {int(v): int(bool(b)) for v, b in p.items()}


def _satisfying_chunks(clauses: Sequence[Sequence[Literal]], free: Sequence[int], fixed: Mapping[int, int]):
    """Yield ``(start, mask)`` where ``mask[i]`` says whether point
    ``start + i`` (over ``free``, the rest taken from ``fixed``) satisfies
    every clause."""
    bit = {v: i for i, v in enumerate(free)}
    reduced = []
    for c in clauses:
        kept = []
        sat = False
        for l in c:
            v = lit_var(l)
            if v in bit:
                kept.append(l)
            elif v in fixed:
                if fixed[v] == (l > 0):
                    sat = True
                    break
            else:
                raise ValueError(f"variable {v} is neither enumerated nor fixed")
        if not sat:
            reduced.append(kept)
    total = 1 << len(free)
    step = min(total, 1 << _CHUNK_BITS)
    for start in range(0, total, step):
        idx = np.arange(start, start + step, dtype=np.int64)
        ok = np.ones(step, dtype=bool)
        for kept in reduced:
            if not kept:
                ok[:] = False
                break
            csat = np.zeros(step, dtype=bool)
            for l in kept:
                b = ((idx >> bit[lit_var(l)]) & 1).astype(bool)
                csat |= b if l > 0 else ~b
            ok &= csat
        yield start, ok


def _any_satisfying(clauses, free, fixed) -> bool:
    return any(mask.any() for _, mask in _satisfying_chunks(clauses, free, fixed))


def brute_force_qsat(f: Formula) -> bool:
    """True iff some complete assignment satisfies ``f``."""
    _check_size(f.num_vars, MAX_QSAT_VARS, "brute_force_qsat")
    used = sorted(f.used_vars())
    return _any_satisfying([c.lits for c in f.clauses], used, {})


def satisfying_points(f: Formula) -> list[dict[int, int]]:
    """Every satisfying point of ``f`` over variables ``1..num_vars``."""
    _check_size(f.num_vars, MAX_POINT_VARS, "satisfying_points")
    free = list(range(1, f.num_vars + 1))
    out = []
    for start, mask in _satisfying_chunks([c.lits for c in f.clauses], free, {}):
        for i in np.flatnonzero(mask):
            idx = start + int(i)
            out.append({v: (idx >> j) & 1 for j, v in enumerate(free)})
    return out


def _context(r) -> dict[int, int]:
    if isinstance(r, (PartialAssignment, Mapping)):
        return _as_dict(r)
    return {lit_var(l): int(l > 0) for l in r}


def dseq_valid(f: Formula, r, z: Iterable[int], escape: bool = True) -> bool:
    """Check the D-sequent ``r -> z`` by brute force.

    ``r`` is a partial assignment, a mapping or an iterable of literals. The
    D-sequent holds if removing the clauses with ``z`` variables from
    ``F|r`` preserves satisfiability, or, with ``escape``, whenever ``f``
    itself is satisfiable.
    """
    _check_size(f.num_vars, MAX_DSEQ_VARS, "dseq_valid")
    ctx = _context(r)
    zs = set(z)
    if zs & ctx.keys():
        raise ValueError("z shares variables with the context")
    if escape and brute_force_qsat(f):
        return True
    g = cofactor(f, ctx)
    free = sorted(g.used_vars())
    whole = _any_satisfying([c.lits for c in g.clauses], free, {})
    kept = [c.lits for c in g.clauses if not (c.vars & zs)]
    return whole == _any_satisfying(kept, free, {})


def implied(f: Formula, c: Clause | Iterable[Literal]) -> bool:
    """True iff every point satisfying ``f`` satisfies ``c``."""
    _check_size(f.num_vars, MAX_QSAT_VARS, "implied")
    lits = _lits(c)
    if any(-l in lits for l in lits):
        return True
    falsify = {lit_var(l): int(l < 0) for l in lits}
    free = sorted(f.used_vars() - falsify.keys())
    return not _any_satisfying([cl.lits for cl in f.clauses], free, falsify)


def falsified_clauses(f: Formula, p: Mapping[int, int] | PartialAssignment) -> list[Clause]:
    pd = _as_dict(p)
    return [c for c in f.clauses if not any(pd.get(lit_var(l)) == (l > 0) for l in c.lits)]


def _covers(falsified: list[Clause], z: set[int]) -> bool:
    return all(c.vars & z for c in falsified)


def is_boundary_point(f: Formula, p: Mapping[int, int] | PartialAssignment, z: Iterable[int]) -> bool:
    """``p`` falsifies ``f``, every falsified clause has a ``z`` variable and
    no proper subset of ``z`` has that property."""
    zs = set(z)
    bad = falsified_clauses(f, p)
    if not bad or not _covers(bad, zs):
        return False
    # covering is monotone in z, so it is enough to try dropping one variable
    return not any(_covers(bad, zs - {v}) for v in zs)


def is_removable(f: Formula, p: Mapping[int, int] | PartialAssignment, y: Iterable[int]) -> bool:
    """True iff no point obtained from ``p`` by changing values of ``y``
    satisfies ``f``."""
    pd = _as_dict(p)
    ys = sorted(set(y))
    _check_size(len(ys), MAX_QSAT_VARS, "is_removable")
    if not falsified_clauses(f, pd):
        raise ValueError("p satisfies f")
    fixed = {v: b for v, b in pd.items() if v not in ys}
    free = [v for v in ys if v in f.used_vars()]
    return not _any_satisfying([c.lits for c in f.clauses], free, fixed)


def minimal_cover(f: Formula, p: Mapping[int, int] | PartialAssignment, z: Iterable[int]) -> set[int] | None:
    """A minimal subset of ``z`` hitting every clause ``p`` falsifies."""
    bad = falsified_clauses(f, p)
    zs = set(z)
    if not bad or not _covers(bad, zs):
        return None
    for v in sorted(zs):
        if _covers(bad, zs - {v}):
            zs.discard(v)
    return zs


def removable_boundary_witness(
    f: Formula,
    q: Mapping[int, int] | PartialAssignment,
    z: Iterable[int],
    in_f: bool = False,
) -> tuple[dict[int, int], set[int]] | None:
    """Search ``F|q`` for a point that is a ``Z'``-boundary point for some
    nonempty ``Z'`` within ``z`` and that no flip turns into a satisfying
    point.

    Flips range over the variables not assigned by ``q`` (removability in
    ``F|q``), or over all variables of ``f`` when ``in_f`` is set. Returns
    the point with its ``Z'``, or None.
    """
    qd = _as_dict(q)
    _check_size(f.num_vars, MAX_DSEQ_VARS, "removable_boundary_witness")
    g = cofactor(f, qd)
    free = [v for v in range(1, f.num_vars + 1) if v not in qd]
    zs = set(z) - qd.keys()
    clauses = [c.lits for c in g.clauses]
    candidates = [c.lits for c in g.clauses if not (c.vars & zs)]
    if in_f:
        removable = not brute_force_qsat(f)
    else:
        removable = not _any_satisfying(clauses, free, {})
    if not removable:
        return None
    # points satisfying every clause without a z variable but not all of F|q
    for start, mask in _satisfying_chunks(candidates, free, {}):
        for i in np.flatnonzero(mask):
            idx = start + int(i)
            p = {v: (idx >> j) & 1 for j, v in enumerate(free)}
            zp = minimal_cover(g, p, zs)
            if zp is None or not is_boundary_point(g, p, zp):
                continue
            y = set(range(1, f.num_vars + 1)) if in_f else set(free)
            point = {**qd, **p}
            if is_removable(f if in_f else g, point if in_f else p, y):
                return point, zp
            return None
    return None


class PointTable:
    """All points of a small formula as packed bitsets, for many oracle
    queries against one (growing) formula.

    Row ``i`` of ``_rows`` has bit ``p`` set iff point ``p`` satisfies clause
    ``i``; ``var_true[v]`` has bit ``p`` set iff point ``p`` assigns ``v=1``.
    """

    MAX_VARS = 16

    def __init__(self, f: Formula):
        n = f.num_vars
        _check_size(n, self.MAX_VARS, "PointTable")
        self.num_vars = n
        idx = np.arange(1 << n, dtype=np.int64)
        self.valid = np.packbits(np.ones(1 << n, dtype=bool))
        self.var_true = {v: np.packbits(((idx >> (v - 1)) & 1).astype(bool)) for v in range(1, n + 1)}
        self.clause_vars: list[frozenset[int]] = []
        self._rows: list[np.ndarray] = []
        for c in f.clauses:
            self.add_clause(c.lits)

    def _lit_row(self, l: Literal) -> np.ndarray:
        row = self.var_true[lit_var(l)]
        return row if l > 0 else ~row & self.valid

    def add_clause(self, lits: Iterable[Literal]) -> None:
        lits = tuple(lits)
        row = np.zeros_like(self.valid)
        for l in lits:
            row |= self._lit_row(l)
        self._rows.append(row)
        self.clause_vars.append(frozenset(lit_var(l) for l in lits))

    def subspace(self, ctx: Mapping[int, int] | Iterable[Literal]) -> np.ndarray:
        mask = self.valid.copy()
        lits = [v if b else -v for v, b in ctx.items()] if isinstance(ctx, Mapping) else ctx
        for l in lits:
            mask &= self._lit_row(l)
        return mask

    def satisfiable(self, within: np.ndarray, skip_vars: frozenset[int] | set[int] = frozenset()) -> bool:
        """Is some point of ``within`` satisfying every clause that has no
        variable in ``skip_vars``?"""
        rows = [r for r, vs in zip(self._rows, self.clause_vars) if not (vs & skip_vars)]
        if not rows:
            return bool(within.any())
        return bool((np.bitwise_and.reduce(rows) & within).any())

    def dseq_valid(self, ctx: Iterable[Literal], z: set[int], escape: bool = True) -> bool:
        if escape and self.satisfiable(self.valid):
            return True
        within = self.subspace(ctx)
        return self.satisfiable(within) == self.satisfiable(within, frozenset(z))

    def implies(self, lits: Iterable[Literal]) -> bool:
        falsify = [-l for l in lits]
        if any(-l in falsify for l in falsify):
            return True
        return not self.satisfiable(self.subspace(falsify))
