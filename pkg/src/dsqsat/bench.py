"""Benchmark families built from copies of a 2-bit multiplier.

The block is a gate-level CNF encoding of ``(a1 a0) * (b1 b0)``. Copies are
renamed apart and have a seeded subset of their variables negated, so they
are equisatisfiable but do not share satisfying points under the identity
correspondence.

Negation masks: ``random.Random(seed)``; copy ``i`` (in order) takes
``getrandbits(D)`` and negates local variable ``j`` when bit ``j - 1`` is set.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .formula import Formula, lit_var

COMPOSITIONAL = "compositional"
CHAINED = "chained"
INTERLEAVED = "interleaved"
BLOCKED = "blocked"

# Block-local variable layout. Outputs come first so that the default
# lowest-index order decides outputs and lets propagation run backwards
# through the gates, where conflicts arise.
P0, P1, P2, P3 = 1, 2, 3, 4
PP10, PP01, PP11 = 5, 6, 7  # a1*b0, a0*b1, a1*b1 (p0 is a0*b0)
OR1, CARRY, NCARRY = 8, 9, 10
OR2, NP3 = 11, 12
A0, A1, B0, B1 = 13, 14, 15, 16
OUTPUTS = (P0, P1, P2, P3)
INPUTS = (A0, A1, B0, B1)
FIRST_INPUT, LAST_INPUT = A0, B1
BLOCK_VARS = 16


def _and(z: int, a: int, b: int) -> list[list[int]]:
    return [[-z, a], [-z, b], [z, -a, -b]]


def _or(z: int, a: int, b: int) -> list[list[int]]:
    return [[z, -a], [z, -b], [-z, a, b]]


def _not(z: int, a: int) -> list[list[int]]:
    return [[z, a], [-z, -a]]


def multiplier_cnf() -> Formula:
    """Gate-level CNF of a 2x2-bit multiplier with free inputs.

    Two half adders (an OR, an AND, a NOT and a final AND each) combine the
    four partial products: 12 gates, 16 variables, 34 clauses.
    """
    clauses: list[list[int]] = []
    clauses += _and(P0, A0, B0)
    clauses += _and(PP10, A1, B0)
    clauses += _and(PP01, A0, B1)
    clauses += _and(PP11, A1, B1)
    # p1 = pp10 xor pp01
    clauses += _or(OR1, PP10, PP01)
    clauses += _and(CARRY, PP10, PP01)
    clauses += _not(NCARRY, CARRY)
    clauses += _and(P1, OR1, NCARRY)
    # p2 = pp11 xor carry, p3 = pp11 and carry
    clauses += _or(OR2, PP11, CARRY)
    clauses += _and(P3, PP11, CARRY)
    clauses += _not(NP3, P3)
    clauses += _and(P2, OR2, NP3)
    return Formula.from_lists(clauses, BLOCK_VARS)


def multiplier_values(a: int, b: int) -> dict[int, int]:
    """Block variable values forced by inputs ``a``, ``b`` in 0..3."""
    a0, a1, b0, b1 = a & 1, a >> 1, b & 1, b >> 1
    v = {A0: a0, A1: a1, B0: b0, B1: b1}
    v[P0], v[PP10], v[PP01], v[PP11] = a0 & b0, a1 & b0, a0 & b1, a1 & b1
    v[OR1], v[CARRY] = v[PP10] | v[PP01], v[PP10] & v[PP01]
    v[NCARRY] = 1 - v[CARRY]
    v[P1] = v[OR1] & v[NCARRY]
    v[OR2], v[P3] = v[PP11] | v[CARRY], v[PP11] & v[CARRY]
    v[NP3] = 1 - v[P3]
    v[P2] = v[OR2] & v[NP3]
    return v


def rename_negate(
    f: Formula,
    var_map: Mapping[int, int],
    negation_mask: Iterable[int] = (),
    num_vars: int | None = None,
) -> Formula:
    """Map each variable through ``var_map`` (identity where absent) and flip
    the literals of variables in ``negation_mask`` (original names)."""
    images = [var_map.get(v, v) for v in range(1, f.num_vars + 1)]
    if len(set(images)) != len(images):
        raise ValueError("variable map is not injective")
    mask = set(negation_mask)
    n = num_vars if num_vars is not None else max(images, default=0)
    out = Formula(n)
    for c in f.clauses:
        lits = []
        for l in c.lits:
            v = lit_var(l)
            nl = var_map.get(v, v) * (1 if l > 0 else -1)
            lits.append(-nl if v in mask else nl)
        out.add(lits)
    return out


@dataclass
class BenchInstance:
    family: str
    k: int
    seed: int
    numbering: str
    formula: Formula
    blocks: list[list[int]]
    communication_vars: list[int] = field(default_factory=list)
    masks: list[set[int]] = field(default_factory=list)
    # per copy: block-local variable -> global variable
    var_maps: list[dict[int, int]] = field(default_factory=list)

    def block_of(self) -> dict[int, int]:
        """Variable -> index of the first block containing it."""
        out: dict[int, int] = {}
        for i, vs in enumerate(self.blocks):
            for v in vs:
                out.setdefault(v, i)
        return out


def _masks(k: int, seed: int, d: int) -> list[set[int]]:
    rng = random.Random(seed)
    out = []
    for _ in range(k):
        bits = rng.getrandbits(d)
        out.append({j for j in range(1, d + 1) if bits >> (j - 1) & 1})
    return out


def _raw_id(i: int, j: int, k: int, d: int, numbering: str) -> int:
    """Global id of local var ``j`` in copy ``i`` (both 1-based)."""
    if numbering == INTERLEAVED:
        return (j - 1) * k + i
    if numbering == BLOCKED:
        return (i - 1) * d + j
    raise ValueError(f"unknown numbering {numbering!r}")


def compositional(k: int, seed: int = 0, numbering: str = INTERLEAVED) -> BenchInstance:
    """``k`` variable-disjoint, renamed and negated copies of the block."""
    if k < 1:
        raise ValueError("k must be at least 1")
    block = multiplier_cnf()
    d = block.num_vars
    masks = _masks(k, seed, d)
    f = Formula(k * d)
    blocks, maps = [], []
    for i in range(1, k + 1):
        var_map = {j: _raw_id(i, j, k, d, numbering) for j in range(1, d + 1)}
        for c in rename_negate(block, var_map, masks[i - 1], k * d).clauses:
            f.add(c.lits)
        blocks.append(sorted(var_map.values()))
        maps.append(var_map)
    return BenchInstance(COMPOSITIONAL, k, seed, numbering, f, blocks, [], masks, maps)


def chained(k: int, seed: int = 0, numbering: str = INTERLEAVED) -> BenchInstance:
    """Like :func:`compositional`, but the last input of copy ``i`` is the
    first input of copy ``i + 1``. Ids are compacted afterwards, so the
    formula has ``d*k - (k-1)`` variables; the shared ones are returned as
    communication variables."""
    if k < 1:
        raise ValueError("k must be at least 1")
    block = multiplier_cnf()
    d = block.num_vars
    masks = _masks(k, seed, d)
    raw_maps = []
    for i in range(1, k + 1):
        m = {j: _raw_id(i, j, k, d, numbering) for j in range(1, d + 1)}
        if i > 1:
            m[FIRST_INPUT] = raw_maps[-1][LAST_INPUT]
        raw_maps.append(m)
    used = sorted({v for m in raw_maps for v in m.values()})
    compact = {raw: new for new, raw in enumerate(used, start=1)}
    n = len(used)
    f = Formula(n)
    blocks, maps = [], []
    for i, m in enumerate(raw_maps):
        var_map = {j: compact[raw] for j, raw in m.items()}
        for c in rename_negate(block, var_map, masks[i], n).clauses:
            f.add(c.lits)
        blocks.append(sorted(var_map.values()))
        maps.append(var_map)
    shared = [compact[raw_maps[i][LAST_INPUT]] for i in range(k - 1)]
    return BenchInstance(CHAINED, k, seed, numbering, f, blocks, shared, masks, maps)


def generate(family: str, k: int, seed: int = 0, numbering: str = INTERLEAVED) -> BenchInstance:
    if family == COMPOSITIONAL:
        return compositional(k, seed, numbering)
    if family == CHAINED:
        return chained(k, seed, numbering)
    raise ValueError(f"unknown family {family!r}")


def write_order_file(path: str, vars_: Iterable[int]) -> None:
    with open(path, "w") as fh:
        for v in vars_:
            fh.write(f"{v}\n")


def read_order_file(path: str) -> list[int]:
    out = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            s = raw.strip()
            if not s or s.startswith("#"):
                continue
            try:
                out.append(int(s))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: not a variable id: {s!r}") from None
    return out


def random_cnf(rng: random.Random, max_vars: int = 12, max_clauses: int = 40, max_len: int = 4) -> Formula:
    """Uniform-ish random CNF: 1..max_vars variables, 0..max_clauses clauses
    of 1..max_len distinct variables with random signs."""
    n = rng.randint(1, max_vars)
    m = rng.randint(0, max_clauses)
    clauses = []
    for _ in range(m):
        size = rng.randint(1, min(max_len, n))
        vs = rng.sample(range(1, n + 1), size)
        clauses.append([v if rng.random() < 0.5 else -v for v in vs])
    return Formula.from_lists(clauses, n)


def random_instances(count: int, seed: int, max_vars: int = 12, max_clauses: int = 40) -> list[Formula]:
    rng = random.Random(seed)
    return [random_cnf(rng, max_vars, max_clauses) for _ in range(count)]
