"""Bounded integer linear programs (maximization) as ew-systems over extended models.

::

    maximize x + y
    subject to
      x + y <= 3
    bounds
      x 0 3
      y 0 3

Every variable needs explicit finite bounds with a lower bound of at least 0:
the unbounded nonnegative integers cannot be enumerated.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..core import Specification, Vocabulary
from ..ewsys import MAX, EwCondition, EwSystem, UniversalModule
from ..logics import ICSPModule, Linear
from .common import SourceProblem, expect
from .syntax import IDENT, ParseError, parse_linear, parse_linear_expression, strip_comment


@dataclass
class IlpProblem:
    objective: dict[str, int] = field(default_factory=dict)
    rows: list[Linear] = field(default_factory=list)
    bounds: dict[str, tuple[int, int]] = field(default_factory=dict)

    def variables(self) -> list[str]:
        seen = list(self.objective)
        for r in self.rows:
            seen.extend(v for v in r.variables if v not in seen)
        seen.extend(v for v in self.bounds if v not in seen)
        return seen


_BOUND = re.compile(rf"^(?:bounds\s+)?(?P<v>{IDENT})\s+(?P<lo>[+-]?\d+)\s+(?P<hi>[+-]?\d+)$")


def parse_ilp(text: str) -> SourceProblem:
    prob = IlpProblem()
    section = None
    seen_objective = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw, "#\\")
        if not line:
            continue
        try:
            if line.startswith("maximize"):
                if seen_objective:
                    raise ParseError("second objective", lineno)
                expr = line[len("maximize"):].strip()
                if re.search(r"\d\s*[./]\s*\d", expr):
                    raise ParseError(f"non-integer coefficient in {expr!r}")
                coeffs, const = parse_linear_expression(expr)
                if const:
                    raise ParseError("constant terms in the objective are not supported")
                prob.objective = coeffs
                seen_objective = True
                section = None
            elif line.startswith("minimize"):
                raise ParseError("IL-programs maximize; negate the objective instead")
            elif re.fullmatch(r"subject\s+to", line):
                section = "rows"
            elif line == "bounds":
                section = "bounds"
            elif line.startswith("bounds ") or section == "bounds":
                m = _BOUND.match(line)
                if not m:
                    raise ParseError(f"bounds read 'x lo hi', got {line!r}")
                lo, hi = int(m.group("lo")), int(m.group("hi"))
                if lo < 0 or lo > hi:
                    raise ParseError(f"bounds of {m.group('v')!r} must satisfy 0 <= lo <= hi")
                prob.bounds[m.group("v")] = (lo, hi)
            elif section == "rows":
                row = parse_linear(line)
                if row.relation not in ("<=", "<", "=", ">=", ">"):
                    raise ParseError(f"unsupported relation in row {line!r}")
                prob.rows.append(row)
            else:
                raise ParseError(f"cannot read {line!r}")
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
    if not seen_objective:
        raise ParseError("missing 'maximize' line")
    unbounded = [v for v in prob.variables() if v not in prob.bounds]
    if unbounded:
        raise ParseError(f"variables {unbounded} lack explicit finite bounds; "
                         "the nonnegative integers are unbounded and cannot be enumerated")
    return SourceProblem("ilp", prob)


def lower_ilp(problem: SourceProblem) -> EwSystem:
    """Hard I-CSP module of the rows; one universal condition with the objective as coefficients."""
    prob: IlpProblem = expect(problem, "ilp")
    assert problem.sense == MAX
    spec = Specification.of({v: range(lo, hi + 1) for v, (lo, hi) in
                             ((v, prob.bounds[v]) for v in prob.variables())})
    hard = ICSPModule(prob.rows, spec)
    soft = EwCondition(UniversalModule(Vocabulary(), spec), 0, {v: b for v, b in prob.objective.items()})
    return EwSystem([hard], [soft])
