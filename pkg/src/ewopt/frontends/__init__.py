"""Concrete dialects and their lowerings into ew-systems."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from ..ewsys import EwSystem
from .asp import (
    clingcon3_optimal_direct,
    lower_clingcon21,
    lower_clingcon22,
    lower_clingcon3,
    lower_oprogram,
    optimal_answer_sets_direct,
    parse_casp,
    parse_oprogram,
)
from .common import DIALECT_SENSE, SourceProblem
from .ilp import lower_ilp, parse_ilp
from .smt import lower_gpw, lower_omt, lower_omt_problem, parse_gpw, parse_omt, weighted_maxsmt_solutions_direct
from .syntax import ParseError
from .wcnf import lower_wcnf, parse_wcnf


@dataclass(frozen=True)
class Format:
    """A CLI format: how to parse, how to lower, and whether extended models are the natural answer."""

    dialect: str
    parse: Callable[[str], SourceProblem]
    lower: Callable[[SourceProblem, bool], EwSystem]
    extended: bool

    @property
    def sense(self) -> str:
        return DIALECT_SENSE[self.dialect]


FORMATS = {
    "wcnf": Format("wcnf", parse_wcnf, lambda p, strict: lower_wcnf(p), False),
    "op": Format("oprogram", parse_oprogram, lambda p, strict: lower_oprogram(p), False),
    "gpw": Format("gpwmaxsmt", parse_gpw, lower_gpw, False),
    "omt": Format("omt", parse_omt, lower_omt_problem, True),
    "ilp": Format("ilp", parse_ilp, lambda p, strict: lower_ilp(p), True),
    "cc21": Format("clingcon21", lambda t: parse_casp(t, "clingcon21"), lower_clingcon21, False),
    "cc22": Format("clingcon22", lambda t: parse_casp(t, "clingcon22"), lower_clingcon22, True),
    "cc3": Format("clingcon3", lambda t: parse_casp(t, "clingcon3"), lower_clingcon3, True),
}


def load(text: str, fmt: str, strict: bool = True) -> tuple[EwSystem, Format]:
    """Parse and lower ``text`` written in CLI format ``fmt``."""
    f = FORMATS[fmt]
    return f.lower(f.parse(text), strict), f


__all__ = [
    "DIALECT_SENSE", "FORMATS", "Format", "ParseError", "SourceProblem", "clingcon3_optimal_direct", "load",
    "lower_clingcon21", "lower_clingcon22", "lower_clingcon3", "lower_gpw", "lower_ilp", "lower_omt",
    "lower_oprogram", "lower_wcnf", "optimal_answer_sets_direct", "parse_casp", "parse_gpw", "parse_ilp",
    "parse_omt", "parse_oprogram", "parse_wcnf", "weighted_maxsmt_solutions_direct",
]
