"""Branching SAT search that records variable redundancy with D-sequents."""

from .dsequent import DSeqStore, DSequent, join
from .engine import SearchStats, SolveResult, SolverConfig, Verdict, ds_qsat, gen_sat_assgn, solve
from .formula import Clause, Formula, PartialAssignment, evaluate, parse_dimacs, read_dimacs

__all__ = [
    "Clause",
    "DSeqStore",
    "DSequent",
    "Formula",
    "PartialAssignment",
    "SearchStats",
    "SolveResult",
    "SolverConfig",
    "Verdict",
    "ds_qsat",
    "evaluate",
    "gen_sat_assgn",
    "join",
    "parse_dimacs",
    "read_dimacs",
    "solve",
]
