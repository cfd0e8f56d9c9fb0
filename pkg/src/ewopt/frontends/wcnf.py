"""DIMACS WCNF: partial weighted MaxSAT as an ew-system solved for its maximum."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import Vocabulary
from ..ewsys import EwCondition, EwSystem
from ..logics import Formula, Or, literal, PLModule
from .common import SourceProblem, expect
from .syntax import ParseError


@dataclass
class Wcnf:
    num_vars: int
    top: int
    hard: list[tuple[int, ...]] = field(default_factory=list)
    soft: list[tuple[int, tuple[int, ...]]] = field(default_factory=list)


def parse_wcnf(text: str) -> SourceProblem:
    """Read ``p wcnf nv nc top`` followed by ``w l1 ... lk 0`` lines; weight ``top`` marks a hard clause."""
    header = None
    clauses: list[tuple[int, tuple[int, ...], int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if header is not None:
                raise ParseError("second header", lineno)
            if len(parts) != 5 or parts[1] != "wcnf":
                raise ParseError("header must read 'p wcnf <nv> <nc> <top>'", lineno)
            try:
                nv, nc, top = (int(x) for x in parts[2:])
            except ValueError:
                raise ParseError("header fields must be integers", lineno) from None
            if nv < 0 or nc < 0 or top < 1:
                raise ParseError("header fields out of range", lineno)
            header = (nv, nc, top)
            continue
        if header is None:
            raise ParseError("clause before the 'p wcnf' header", lineno)
        try:
            nums = [int(x) for x in line.split()]
        except ValueError:
            raise ParseError(f"clause line must be integers: {line!r}", lineno) from None
        if len(nums) < 2 or nums[-1] != 0 or 0 in nums[1:-1]:
            raise ParseError("clause must be 'weight literals... 0'", lineno)
        clauses.append((nums[0], tuple(nums[1:-1]), lineno))
    if header is None:
        raise ParseError("missing 'p wcnf' header")
    nv, nc, top = header
    if len(clauses) != nc:
        raise ParseError(f"header announces {nc} clauses, found {len(clauses)}")
    body = Wcnf(nv, top)
    for w, lits, lineno in clauses:
        for lit in lits:
            if abs(lit) > nv:
                raise ParseError(f"literal {lit} out of range 1..{nv}", lineno)
        if w < 1:
            raise ParseError(f"weights must be positive, got {w}", lineno)
        if w > top:
            raise ParseError(f"weight {w} exceeds top {top}", lineno)
        if w == top:
            body.hard.append(lits)
        else:
            body.soft.append((w, lits))
    return SourceProblem("wcnf", body)


def _atom(v: int) -> str:
    return f"x{v}"


def _clause(lits) -> Formula:
    return Or(tuple(literal(_atom(abs(l)), l > 0) for l in lits))


def lower_wcnf(problem: SourceProblem) -> EwSystem:
    """Hard clauses become one sat-logic module over ``x1..xn``; each soft clause a condition at level 1."""
    body: Wcnf = expect(problem, "wcnf")
    vocab = Vocabulary(tuple(_atom(v) for v in range(1, body.num_vars + 1)))
    hard = PLModule([_clause(c) for c in body.hard], vocab, clausal=True)
    soft = []
    for w, lits in body.soft:
        sub = vocab.restrict(_atom(abs(l)) for l in lits)
        soft.append(EwCondition(PLModule([_clause(lits)], sub, clausal=True), w, level=1))
    return EwSystem([hard], soft)
