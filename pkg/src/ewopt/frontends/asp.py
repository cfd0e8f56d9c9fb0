"""Logic programs with weak constraints, and constraint answer set programs.

O-programs are solved for min-optimal models.  CASP documents come in three
flavours: weak constraints over regular atoms (``clingcon21``), a
``$minimize{x, y}`` over constraint variables (``clingcon22``) and leveled
linear ``$minimize{2*x+1@1, ...}`` terms (``clingcon3``).
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from ..core import Specification, Vocabulary, enumerate_evaluations, enumerate_interpretations
from ..ewsys import MIN, EwCondition, EwSystem, UniversalModule
from ..logics import (
    CASModule,
    Constraint,
    LPModule,
    PLModule,
    Rule,
    SMTModule,
    conjunction,
    is_answer_set,
    is_cas_extended_answer_set,
)
from ..solver import _dominates_costs
from .common import SourceProblem, expect
from .syntax import BAR_ATOM, IDENT, ParseError, parse_body, parse_constraint, parse_linear_expression, parse_rule, split_top, strip_comment


@dataclass(frozen=True)
class WeakConstraint:
    """``:~ body. [weight@level]``."""

    pos: tuple[str, ...]
    neg: tuple[str, ...]
    weight: int
    level: int = 1

    def holds(self, interp) -> bool:
        return all(a in interp for a in self.pos) and not any(a in interp for a in self.neg)

    def __str__(self):
        body = ", ".join(list(self.pos) + [f"not {a}" for a in self.neg])
        return f":~ {body}. [{self.weight}@{self.level}]"


@dataclass
class OProgram:
    rules: list[Rule] = field(default_factory=list)
    weak: list[WeakConstraint] = field(default_factory=list)
    atoms: list[str] = field(default_factory=list)  # order of first appearance

    def note(self, names):
        for a in names:
            if a not in self.atoms:
                self.atoms.append(a)


@dataclass(frozen=True)
class MinimizeTerm:
    """``coef * var + const @ level``; ``var`` is ``None`` for a bare constant."""

    coef: int
    var: str | None
    const: int
    level: int = 1


@dataclass
class CaspProgram(OProgram):
    denotation: dict[str, Constraint] = field(default_factory=dict)
    declared: dict[str, tuple[int, ...]] = field(default_factory=dict)
    default_domain: tuple[int, ...] | None = None
    minimize: list[MinimizeTerm] = field(default_factory=list)
    minimize_vars: list[str] = field(default_factory=list)

    def vocabulary(self) -> Vocabulary:
        return Vocabulary(tuple(self.atoms), frozenset(self.denotation))

    def specification(self) -> Specification:
        """Declared variables, then undeclared constraint variables under ``$domain``."""
        domains = dict(self.declared)
        for a in self.atoms:
            if a not in self.denotation:
                continue
            for v in self.denotation[a].variables:
                if v in domains:
                    continue
                if self.default_domain is None:
                    raise ParseError(f"variable {v!r} has no bounds: declare it with 'var {v} int lo hi' or use $domain")
                domains[v] = self.default_domain
        return Specification.of(domains)


_LEVEL = re.compile(r"^(?P<body>.*?)\.?\s*\[\s*(?P<w>[+-]?\d+)\s*(?:@\s*(?P<l>[+-]?\d+))?\s*\]\s*\.?$")
_AGG = re.compile(r"^(?P<kind>#minimize|#maximize|\$minimize)\s*\{(?P<body>.*)\}\s*\.?$")


def _level(text: str | None, lineno: int) -> int:
    level = int(text) if text is not None else 1
    if level < 1:
        raise ParseError(f"levels must be positive, got {level}", lineno)
    return level


def _weak(text: str, lineno: int) -> WeakConstraint:
    m = _LEVEL.match(text)
    if not m:
        raise ParseError("weak constraint must read ':~ body. [w@l]'", lineno)
    pos, neg = parse_body(m.group("body"))
    if not pos and not neg:
        raise ParseError("weak constraint with an empty body", lineno)
    return WeakConstraint(pos, neg, int(m.group("w")), _level(m.group("l"), lineno))


def expand_optimize(kind: str, body: str, lineno: int | None = None) -> list[WeakConstraint]:
    """``#minimize{w@l: lit, ...}`` as weak constraints; ``#maximize`` negates the weights."""
    out = []
    sign = -1 if kind == "#maximize" else 1
    for elem in split_top(body):
        if not elem:
            continue
        if ":" not in elem:
            raise ParseError(f"optimize element must read 'w@l: literal', got {elem!r}", lineno)
        weight, lit = elem.split(":", 1)
        m = re.fullmatch(r"\s*([+-]?\d+)\s*(?:@\s*([+-]?\d+))?\s*", weight)
        if not m:
            raise ParseError(f"bad weight {weight.strip()!r}", lineno)
        pos, neg = parse_body(lit)
        if len(pos) + len(neg) != 1:
            raise ParseError(f"optimize elements take one literal, got {lit.strip()!r}", lineno)
        out.append(WeakConstraint(pos, neg, sign * int(m.group(1)), _level(m.group(2), lineno)))
    return out


def _program_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = strip_comment(raw, "%")
        if line:
            yield lineno, line


def _statement(prog: OProgram, line: str, lineno: int) -> bool:
    """Rules, weak constraints and ``#minimize``/``#maximize``; False when not recognised."""
    if line.startswith(":~"):
        w = _weak(line[2:].strip(), lineno)
        prog.weak.append(w)
        prog.note(w.pos + w.neg)
        return True
    m = _AGG.match(line)
    if m and m.group("kind") != "$minimize":
        ws = expand_optimize(m.group("kind"), m.group("body"), lineno)
        prog.weak.extend(ws)
        for w in ws:
            prog.note(w.pos + w.neg)
        return True
    if not line.endswith("."):
        return False
    try:
        rule = parse_rule(line[:-1])
    except ParseError as exc:
        raise ParseError(str(exc), lineno) from None
    prog.rules.append(rule)
    prog.note(([rule.head] if rule.head else []) + list(rule.pos) + list(rule.neg))
    return True


def parse_oprogram(text: str) -> SourceProblem:
    """One statement per line: ``h :- b, not c.``, facts, ``:- body.``, weak constraints, optimize statements."""
    prog = OProgram()
    for lineno, line in _program_lines(text):
        try:
            ok = _statement(prog, line, lineno)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
        if not ok:
            raise ParseError(f"cannot read statement {line!r} (missing final '.'?)", lineno)
    return SourceProblem("oprogram", prog)


def _program_vocabulary(prog: OProgram) -> list[str]:
    in_rules = []
    for r in prog.rules:
        for a in ([r.head] if r.head else []) + list(r.pos) + list(r.neg):
            if a not in in_rules:
                in_rules.append(a)
    extra = [a for w in prog.weak for a in w.pos + w.neg if a not in in_rules]
    if extra:
        extra = list(dict.fromkeys(extra))
        warnings.warn(f"weak constraint atoms {extra} do not occur in the rules; adding them to the vocabulary", stacklevel=3)
    return [a for a in prog.atoms if a in in_rules or a in extra]


def _weak_condition(w: WeakConstraint, vocab: Vocabulary) -> EwCondition:
    sub = vocab.restrict(w.pos + w.neg)
    return EwCondition(PLModule([conjunction(w.pos, w.neg)], sub), w.weight, level=w.level)


def lower_oprogram(problem: SourceProblem) -> EwSystem:
    """Hard answer-set module plus one conjunction condition per weak constraint (sense min)."""
    prog: OProgram = expect(problem, "oprogram")
    assert problem.sense == MIN
    vocab = Vocabulary(tuple(_program_vocabulary(prog)))
    hard = LPModule(prog.rules, vocab)
    return EwSystem([hard], [_weak_condition(w, vocab) for w in prog.weak])


def _dominated_free(items, costs_of, level_set):
    profile = [costs_of(x) for x in items]
    return [x for x, c in zip(items, profile)
            if not any(_dominates_costs(o, c, level_set, MIN) for o in profile)]


def optimal_answer_sets_direct(prog: OProgram) -> list[frozenset]:
    """Answer sets that no other answer set dominates, by the weak-constraint definition directly."""
    vocab = Vocabulary(tuple(dict.fromkeys(list(prog.atoms))))
    answer_sets = [x for x in enumerate_interpretations(vocab) if is_answer_set(prog.rules, x)]
    level_set = sorted({w.level for w in prog.weak})

    def costs(x):
        return {l: sum(w.weight for w in prog.weak if w.level == l and w.holds(x)) for l in level_set}

    return _dominated_free(answer_sets, costs, level_set)


# -- constraint answer set programs -----------------------------------------------

_ATOM_DEF = re.compile(rf"^atom\s+(?P<name>{BAR_ATOM}|{IDENT})\s*:=\s*(?P<def>.+?)\.?$")
_VAR = re.compile(rf"^var\s+(?P<name>{IDENT})\s+int\s+(?P<lo>[+-]?\d+)\s+(?P<hi>[+-]?\d+)\s*\.?$")
_DOMAIN = re.compile(r"^\$domain\s*\(\s*(?P<lo>[+-]?\d+)\s*\.\.\s*(?P<hi>[+-]?\d+)\s*\)\s*\.?$")
CASP_DIALECTS = ("clingcon21", "clingcon22", "clingcon3")


def _range(lo: str, hi: str, lineno: int) -> tuple[int, ...]:
    lo_i, hi_i = int(lo), int(hi)
    if lo_i > hi_i:
        raise ParseError(f"empty range {lo_i}..{hi_i}", lineno)
    return tuple(range(lo_i, hi_i + 1))


def _minimize_terms(body: str, dialect: str, lineno: int) -> tuple[list[MinimizeTerm], list[str]]:
    terms, names = [], []
    for elem in split_top(body):
        if not elem:
            continue
        if dialect == "clingcon22":
            if not re.fullmatch(IDENT, elem):
                raise ParseError(f"$minimize lists constraint variables here, got {elem!r}", lineno)
            names.append(elem)
            continue
        expr, _, level = elem.partition("@")
        coeffs, const = parse_linear_expression(expr)
        coeffs = {v: b for v, b in coeffs.items() if b != 0} or coeffs
        if len(coeffs) > 1:
            raise ParseError(f"each $minimize term has at most one variable: {elem!r}", lineno)
        (var, coef), = coeffs.items() if coeffs else ((None, 0),)
        terms.append(MinimizeTerm(coef, var, const, _level(level.strip() or None, lineno)))
    return terms, names


def parse_casp(text: str, dialect: str = "clingcon21") -> SourceProblem:
    """O-program syntax plus ``var``, ``$domain``, ``atom q := ...`` and ``$minimize{...}``."""
    if dialect not in CASP_DIALECTS:
        raise ValueError(f"dialect must be one of {CASP_DIALECTS}")
    prog = CaspProgram()
    for lineno, line in _program_lines(text):
        try:
            if m := _VAR.match(line):
                if m.group("name") in prog.declared:
                    raise ParseError(f"variable {m.group('name')!r} declared twice", lineno)
                prog.declared[m.group("name")] = _range(m.group("lo"), m.group("hi"), lineno)
            elif m := _DOMAIN.match(line):
                prog.default_domain = _range(m.group("lo"), m.group("hi"), lineno)
            elif m := _ATOM_DEF.match(line):
                name = m.group("name")
                if name in prog.denotation:
                    raise ParseError(f"constraint atom {name!r} defined twice", lineno)
                prog.denotation[name] = parse_constraint(m.group("def"))
                prog.note([name])
            elif (m := _AGG.match(line)) and m.group("kind") == "$minimize":
                if dialect == "clingcon21":
                    raise ParseError("$minimize over constraint variables is not part of the clingcon21 dialect", lineno)
                terms, names = _minimize_terms(m.group("body"), dialect, lineno)
                prog.minimize.extend(terms)
                prog.minimize_vars.extend(n for n in names if n not in prog.minimize_vars)
            elif not _statement(prog, line, lineno):
                raise ParseError(f"cannot read statement {line!r}", lineno)
        except ParseError as exc:
            if exc.line is None:
                raise ParseError(str(exc), lineno) from None
            raise
    if prog.weak and dialect != "clingcon21":
        raise ParseError(f"weak constraints belong to the clingcon21 dialect, not {dialect}")
    heads = {r.head for r in prog.rules if r.head}
    bad = sorted(heads & prog.denotation.keys())
    if bad:
        raise ParseError(f"constraint atoms {bad} cannot be rule heads")
    seen = set()
    for t in prog.minimize:
        if t.var is None:
            continue
        if (t.var, t.level) in seen:
            raise ParseError(f"variable {t.var!r} occurs twice at level {t.level} of $minimize")
        seen.add((t.var, t.level))
    return SourceProblem(dialect, prog)


def _cas_hard(prog: CaspProgram, strict: bool) -> tuple[CASModule, Vocabulary, Specification]:
    vocab = prog.vocabulary()
    spec = prog.specification()
    return CASModule(prog.rules, vocab, spec, prog.denotation, strict), vocab, spec


def _check_vars(names, spec: Specification):
    unknown = [v for v in names if v not in spec]
    if unknown:
        raise ParseError(f"unknown constraint variables {unknown}")


def lower_clingcon21(problem: SourceProblem, strict: bool = True) -> EwSystem:
    """CAS module plus one RSMT conjunction condition per weak constraint over regular atoms."""
    prog: CaspProgram = expect(problem, "clingcon21")
    assert problem.sense == MIN
    hard, vocab, spec = _cas_hard(prog, strict)
    soft = []
    for w in prog.weak:
        irregular = [a for a in w.pos + w.neg if a in prog.denotation]
        if irregular:
            raise ParseError(f"weak constraint {w} mentions constraint atoms {irregular}; clingcon21 weak bodies are regular")
        sub = vocab.restrict(w.pos + w.neg)
        module = SMTModule([conjunction(w.pos, w.neg)], sub, Specification(), {}, strict, restricted=True)
        soft.append(EwCondition(module, w.weight, level=w.level))
    return EwSystem([hard], soft)


def lower_clingcon22(problem: SourceProblem, strict: bool = True) -> EwSystem:
    """CAS module plus the universal condition with coefficient 1 on each minimized variable."""
    prog: CaspProgram = expect(problem, "clingcon22")
    assert problem.sense == MIN
    hard, vocab, spec = _cas_hard(prog, strict)
    _check_vars(prog.minimize_vars, spec)
    soft = []
    if prog.minimize_vars:
        coeffs = {v: 1 for v in prog.minimize_vars}
        soft.append(EwCondition(UniversalModule(vocab, spec), 0, coeffs, 1))
    return EwSystem([hard], soft)


def lower_clingcon3(problem: SourceProblem, strict: bool = True) -> EwSystem:
    """Per level ``l``: a universal condition of weight ``w_l`` and one carrying the coefficients ``c_l``."""
    prog: CaspProgram = expect(problem, "clingcon3")
    assert problem.sense == MIN
    hard, vocab, spec = _cas_hard(prog, strict)
    _check_vars([t.var for t in prog.minimize if t.var], spec)
    soft = []
    for level in sorted({t.level for t in prog.minimize}):
        at = [t for t in prog.minimize if t.level == level]
        w = sum(t.const for t in at)
        coeffs = {t.var: t.coef for t in at if t.var}
        universal = UniversalModule(vocab, spec)
        soft.append(EwCondition(universal, w, level=level))
        soft.append(EwCondition(universal, 0, coeffs, level))
    return EwSystem([hard], soft)


def extended_answer_sets(prog: CaspProgram, strict: bool = True):
    """Every ``(X, nu)`` pair satisfying the CAS program, straight from the definition."""
    vocab, spec = prog.vocabulary(), prog.specification()
    return [
        (x, nu)
        for x in enumerate_interpretations(vocab)
        for nu in enumerate_evaluations(spec)
        if is_cas_extended_answer_set(prog.rules, prog.denotation, x, nu, vocab, spec, strict)
    ]


def clingcon3_optimal_direct(prog: CaspProgram, strict: bool = True):
    """Optimal extended answer sets under the leveled ``$minimize`` domination definition."""
    level_set = sorted({t.level for t in prog.minimize})

    def sums(pair):
        nu = pair[1]
        return {l: sum((Fraction(t.coef * (nu[t.var] if t.var else 0) + t.const) for t in prog.minimize if t.level == l),
                       Fraction(0)) for l in level_set}

    return _dominated_free(extended_answer_sets(prog, strict), sums, level_set)
