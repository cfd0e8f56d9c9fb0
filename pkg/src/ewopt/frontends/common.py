"""Parsed source problems and helpers shared by the dialect lowerings."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from ..ewsys import MAX, MIN

DIALECT_SENSE = {
    "wcnf": MAX,
    "oprogram": MIN,
    "gpwmaxsmt": MAX,
    "omt": MIN,
    "ilp": MAX,
    "clingcon21": MIN,
    "clingcon22": MIN,
    "clingcon3": MIN,
}


@dataclass
class SourceProblem:
    """A parsed document in one of the concrete dialects.

    ``sense`` is fixed by the dialect and checked on construction.
    """

    dialect: str
    body: Any
    sense: str = ""

    def __post_init__(self):
        if self.dialect not in DIALECT_SENSE:
            raise ValueError(f"unknown dialect {self.dialect!r}")
        fixed = DIALECT_SENSE[self.dialect]
        if self.sense and self.sense != fixed:
            raise ValueError(f"dialect {self.dialect} is solved with sense {fixed}, not {self.sense}")
        self.sense = fixed


def expect(problem: SourceProblem, *dialects: str) -> Any:
    if problem.dialect not in dialects:
        raise ValueError(f"expected a {' or '.join(dialects)} problem, got {problem.dialect}")
    return problem.body
