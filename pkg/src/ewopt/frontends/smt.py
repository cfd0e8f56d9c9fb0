"""Generalized partially weighted MaxSMT (``gpw``) and cost-variable OMT documents.

Line format::

    var x int -2 2
    bool b
    atom a1 := x > 0
    atom q := table(x) {1;2}
    assert a2 -> a1
    assert-soft not a1 :weight 5 :level 1 :coeff x=1/2
    minimize x          (omt only)

A gpw document without ``assert`` lines is a weighted MaxSMT problem: its hard
part is the universal module over every declared atom and variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import Specification, Vocabulary, enumerate_evaluations, enumerate_interpretations
from ..ewsys import MAX, MIN, EwCondition, EwSystem, UniversalModule
from ..logics import Constraint, Formula, SMTModule, satisfies_constraint
from .common import SourceProblem, expect
from .syntax import BAR_ATOM, IDENT, ParseError, parse_constraint, parse_formula, parse_fraction, strip_comment


@dataclass
class SoftAssertion:
    formula: Formula
    weight: int = 1
    level: int = 1
    coefficients: dict[str, Fraction] = field(default_factory=dict)


@dataclass
class SmtDocument:
    variables: dict[str, tuple[int, ...]] = field(default_factory=dict)
    regular: list[str] = field(default_factory=list)
    denotation: dict[str, Constraint] = field(default_factory=dict)
    atoms: list[str] = field(default_factory=list)  # declaration order
    hard: list[Formula] = field(default_factory=list)
    soft: list[SoftAssertion] = field(default_factory=list)
    objective: str | None = None

    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple(self.atoms), frozenset(self.denotation))

    def specification(self) -> Specification:
        return Specification.of(self.variables)

    def constraint_variables(self, atoms) -> list[str]:
        out = []
        for a in atoms:
            if a in self.denotation:
                out.extend(v for v in self.denotation[a].variables if v not in out)
        return out


_VAR = re.compile(rf"^var\s+(?P<name>{IDENT})\s+int\s+(?P<lo>[+-]?\d+)\s+(?P<hi>[+-]?\d+)$")
_VAR_LOOSE = re.compile(rf"^var\s+(?P<name>{IDENT})\b")
_BOOL = re.compile(rf"^bool((?:\s+(?:{IDENT}|{BAR_ATOM}))+)$")
_ATOM = re.compile(rf"^atom\s+(?P<name>{BAR_ATOM}|{IDENT})\s*:=\s*(?P<def>.+)$")
_OPTION = re.compile(r"\s:(weight|level|coeff)\b")


def _soft(text: str, doc: SmtDocument, lineno: int) -> SoftAssertion:
    m = _OPTION.search(" " + text)
    formula_text = text if not m else (" " + text)[: m.start()]
    opts = "" if not m else (" " + text)[m.start():]
    weight, level, coeffs = 1, 1, {}
    for key, value in re.findall(r":(\w+)\s*([^:]*)", opts):
        value = value.strip()
        if key == "weight":
            if not re.fullmatch(r"[+-]?\d+", value):
                raise ParseError(f":weight takes an integer, got {value!r}", lineno)
            weight = int(value)
        elif key == "level":
            if not re.fullmatch(r"\d+", value) or int(value) < 1:
                raise ParseError(f":level takes a positive integer, got {value!r}", lineno)
            level = int(value)
        elif key == "coeff":
            for item in value.split():
                var, eq, q = item.partition("=")
                if not eq:
                    raise ParseError(f":coeff entries read var=q, got {item!r}", lineno)
                if var not in doc.variables:
                    raise ParseError(f"undeclared variable {var!r} in :coeff", lineno)
                coeffs[var] = parse_fraction(q)
        else:
            raise ParseError(f"unknown option :{key}", lineno)
    return SoftAssertion(parse_formula(formula_text), weight, level, coeffs)


def _check_atoms(f: Formula, doc: SmtDocument, lineno: int):
    unknown = sorted(f.atoms() - set(doc.atoms))
    if unknown:
        raise ParseError(f"undeclared atoms {unknown} (declare with 'bool' or 'atom')", lineno)


def _parse(text: str, dialect: str) -> SmtDocument:
    doc = SmtDocument()
    pending = []  # formulas may mention atoms declared further down

    def declare(name, lineno):
        if name in doc.atoms:
            raise ParseError(f"atom {name!r} declared twice", lineno)
        doc.atoms.append(name)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw, "#")
        if not line:
            continue
        try:
            if line.startswith("var"):
                m = _VAR.match(line)
                if not m:
                    name = _VAR_LOOSE.match(line)
                    what = f" for {name.group('name')!r}" if name else ""
                    raise ParseError(f"missing bounds{what}: write 'var x int lo hi'", lineno)
                lo, hi = int(m.group("lo")), int(m.group("hi"))
                if lo > hi or m.group("name") in doc.variables:
                    raise ParseError(f"bad or repeated declaration of {m.group('name')!r}", lineno)
                doc.variables[m.group("name")] = tuple(range(lo, hi + 1))
            elif m := _BOOL.match(line):
                for name in m.group(1).split():
                    declare(name, lineno)
                    doc.regular.append(name)
            elif m := _ATOM.match(line):
                c = parse_constraint(m.group("def"))
                missing = [v for v in c.variables if v not in doc.variables]
                if missing:
                    raise ParseError(f"undeclared variables {missing}", lineno)
                declare(m.group("name"), lineno)
                doc.denotation[m.group("name")] = c
            elif line.startswith("assert-soft"):
                s = _soft(line[len("assert-soft"):].strip(), doc, lineno)
                doc.soft.append(s)
                pending.append((s.formula, lineno))
            elif line.startswith("assert"):
                f = parse_formula(line[len("assert"):].strip())
                doc.hard.append(f)
                pending.append((f, lineno))
            elif line.startswith("minimize") and dialect == "omt":
                name = line[len("minimize"):].strip()
                if doc.objective is not None:
                    raise ParseError("only one minimize line is allowed", lineno)
                doc.objective = name
            else:
                raise ParseError(f"cannot read {line!r}", lineno)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
    for f, lineno in pending:
        _check_atoms(f, doc, lineno)
    return doc


def parse_gpw(text: str) -> SourceProblem:
    return SourceProblem("gpwmaxsmt", _parse(text, "gpw"))


def parse_omt(text: str) -> SourceProblem:
    doc = _parse(text, "omt")
    if doc.soft:
        raise ParseError("OMT documents take no assert-soft lines")
    if doc.objective is None:
        raise ParseError("OMT document without a 'minimize v' line")
    return SourceProblem("omt", doc)


def _hard_module(doc: SmtDocument, strict: bool):
    vocab, spec = doc.vocabulary(), doc.specification()
    if not doc.hard:
        return UniversalModule(vocab, spec)
    return SMTModule(doc.hard, vocab, spec, doc.denotation, strict)


def soft_module(s: SoftAssertion, doc: SmtDocument, strict: bool = True) -> SMTModule:
    """SMT module over the atoms of the soft formula and the variables they or its coefficients use."""
    atoms = [a for a in doc.atoms if a in s.formula.atoms()]
    variables = doc.constraint_variables(atoms)
    variables += [v for v in s.coefficients if v not in variables]
    spec = doc.specification().restrict(variables)
    vocab = doc.vocabulary().restrict(atoms)
    return SMTModule([s.formula], vocab, spec, doc.denotation, strict)


def lower_gpw(problem: SourceProblem, strict: bool = True) -> EwSystem:
    """Hard SMT module (universal without asserts); one condition per soft assertion (sense max)."""
    doc: SmtDocument = expect(problem, "gpwmaxsmt")
    assert problem.sense == MAX
    soft = [EwCondition(soft_module(s, doc, strict), s.weight, s.coefficients, s.level) for s in doc.soft]
    return EwSystem([_hard_module(doc, strict)], soft)


def lower_omt(hard, objective: str) -> EwSystem:
    """Add the condition ``(T[∅; v], 0; v↦1)`` to a hard SMT part (sense min).

    ``hard`` is an ew-system, an iterable of modules, or a parsed OMT problem.
    """
    if isinstance(hard, SourceProblem):
        doc: SmtDocument = expect(hard, "omt")
        assert hard.sense == MIN
        modules = [_hard_module(doc, True)]
    elif isinstance(hard, EwSystem):
        modules = list(hard.hard.modules)
    else:
        modules = list(hard)
    system = EwSystem(modules)
    if objective not in system.specification:
        raise ParseError(f"unknown objective variable {objective!r}")
    spec = system.specification.restrict([objective])
    return EwSystem(modules, [EwCondition(UniversalModule(Vocabulary(), spec), 0, {objective: 1})])


def lower_omt_problem(problem: SourceProblem, strict: bool = True) -> EwSystem:
    doc: SmtDocument = expect(problem, "omt")
    return lower_omt([_hard_module(doc, strict)], doc.objective)


def weighted_maxsmt_solutions_direct(doc: SmtDocument, strict: bool = True) -> list[frozenset]:
    """Interpretations maximizing the total weight of satisfied soft formulas.

    A soft formula counts for ``I`` when some evaluation makes ``I`` agree with
    the denotation of the formula's constraint atoms, the plain weighted
    MaxSMT reading, computed here without building any ew-system.
    """
    vocab, spec = doc.vocabulary(), doc.specification()
    evaluations = list(enumerate_evaluations(spec))

    def consistent(interp, atoms, nu):
        for a in atoms:
            if a in doc.denotation:
                sat = satisfies_constraint(nu, doc.denotation[a])
                if a in interp and not sat:
                    return False
                if strict and a not in interp and sat:
                    return False
        return True

    def score(interp):
        total = 0
        for s in doc.soft:
            atoms = s.formula.atoms()
            if s.formula.holds(interp) and any(consistent(interp, atoms, nu) for nu in evaluations):
                total += s.weight
        return total

    interps = list(enumerate_interpretations(vocab))
    scores = [score(i) for i in interps]
    best = max(scores) if scores else 0
    return [i for i, s in zip(interps, scores) if s == best]
