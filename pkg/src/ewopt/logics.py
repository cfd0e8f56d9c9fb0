"""Concrete logics behind e-modules.

Constraints and their complements, propositional formulas, logic programs
with reducts and (input) answer sets, SMT formulas, CAS programs and integer
CSPs.  Each logic is exposed as an :class:`EModule` subclass whose only job
is to decide membership of an extended interpretation in its semantics.
"""

from __future__ import annotations

import functools
import itertools
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass
from typing import Union

from .core import (
    EMPTY_EVALUATION,
    Evaluation,
    Specification,
    Vocabulary,
    enumerate_evaluations,
    enumerate_interpretations,
)

RELATIONS = ("<", ">", "<=", ">=", "=", "!=")
_COMPLEMENT = {"<": ">=", ">=": "<", ">": "<=", "<=": ">", "=": "!=", "!=": "="}
_ALIASES = {"≤": "<=", "≥": ">=", "≠": "!=", "==": "=", "<>": "!="}


def normalize_relation(rel: str) -> str:
    rel = _ALIASES.get(rel, rel)
    if rel not in RELATIONS:
        raise ValueError(f"unknown relation {rel!r}")
    return rel


def _compare(lhs: int, rel: str, rhs: int) -> bool:
    if rel == "<=":
        return lhs <= rhs
    if rel == ">=":
        return lhs >= rhs
    if rel == "<":
        return lhs < rhs
    if rel == ">":
        return lhs > rhs
    if rel == "=":
        return lhs == rhs
    return lhs != rhs


# -- constraints ---------------------------------------------------------------


@dataclass(frozen=True)
class Linear:
    """``sum(b * x for b, x in terms) <relation> rhs`` over the integers."""

    terms: tuple[tuple[int, str], ...]
    relation: str
    rhs: int

    def __post_init__(self):
        terms = tuple((int(b), str(x)) for b, x in self.terms)
        names = [x for _, x in terms]
        if len(set(names)) != len(names):
            raise ValueError(f"repeated variable in linear constraint: {names}")
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "relation", normalize_relation(self.relation))
        object.__setattr__(self, "rhs", int(self.rhs))

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(x for _, x in self.terms)

    def satisfied(self, nu: Mapping[str, int]) -> bool:
        return _compare(sum(b * nu[x] for b, x in self.terms), self.relation, self.rhs)

    def __str__(self):
        lhs = " + ".join(f"{b}*{x}" for b, x in self.terms) or "0"
        return f"{lhs} {self.relation} {self.rhs}"


@dataclass(frozen=True)
class Extensional:
    """Explicit relation: the tuple of values of ``variables`` must be in ``allowed``."""

    variables: tuple[str, ...]
    allowed: frozenset[tuple[int, ...]]

    def __post_init__(self):
        variables = tuple(str(v) for v in self.variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"repeated variable in table constraint: {variables}")
        allowed = frozenset(tuple(int(x) for x in t) for t in self.allowed)
        for t in allowed:
            if len(t) != len(variables):
                raise ValueError(f"tuple {t} does not match arity {len(variables)}")
        object.__setattr__(self, "variables", variables)
        object.__setattr__(self, "allowed", allowed)

    def satisfied(self, nu: Mapping[str, int]) -> bool:
        return tuple(nu[v] for v in self.variables) in self.allowed

    def __str__(self):
        rows = ";".join(",".join(map(str, t)) for t in sorted(self.allowed))
        return f"table({','.join(self.variables)}) {{{rows}}}"


Constraint = Union[Linear, Extensional]
Denotation = Mapping[str, Constraint]


def satisfies_constraint(nu: Mapping[str, int], c: Constraint) -> bool:
    missing = [x for x in c.variables if x not in nu]
    if missing:
        raise KeyError(f"evaluation does not define {missing}")
    return c.satisfied(nu)


@functools.lru_cache(maxsize=4096)
def complement_constraint(c: Constraint, spec: Specification | None = None) -> Constraint:
    """The constraint satisfied by exactly the evaluations that violate ``c``.

    Linear constraints flip their relation and need no domains; a table
    constraint needs ``spec`` to form ``D^k`` minus its relation.
    """
    if isinstance(c, Linear):
        return Linear(c.terms, _COMPLEMENT[c.relation], c.rhs)
    if spec is None:
        raise ValueError("the complement of a table constraint needs a specification")
    full = itertools.product(*(spec.domain(v) for v in c.variables))
    return Extensional(c.variables, frozenset(t for t in full if t not in c.allowed))


def check_constraint(c: Constraint, spec: Specification) -> list[str]:
    problems = [f"variable {v!r} of {c} is not declared" for v in c.variables if v not in spec]
    if isinstance(c, Extensional) and not problems:
        for t in c.allowed:
            bad = [v for v, x in zip(c.variables, t) if x not in spec.domain(v)]
            if bad:
                problems.append(f"tuple {t} of {c} leaves the domain of {bad}")
    return problems


def csp_side_condition(
    scope: Iterable[str],
    interp: Iterable[str],
    denotation: Denotation,
    strict: bool = True,
    spec: Specification | None = None,
) -> list[Constraint]:
    """Constraints an evaluation must solve for the given constraint atoms.

    True atoms contribute their constraint; in strict mode false atoms
    contribute its complement, in non-strict mode they contribute nothing.
    """
    interp = frozenset(interp)
    out = []
    for a in scope:
        if a not in denotation:
            raise KeyError(f"no constraint is associated with atom {a!r}")
        if a in interp:
            out.append(denotation[a])
        elif strict:
            out.append(complement_constraint(denotation[a], spec))
    return out


def is_icsp_solution(constraints: Iterable[Constraint], nu: Mapping[str, int], interp: Iterable[str] = ()) -> bool:
    if frozenset(interp):
        return False
    return all(c.satisfied(nu) for c in constraints)


# -- propositional formulas ----------------------------------------------------


class Formula:
    def holds(self, interp: frozenset) -> bool:
        raise NotImplementedError

    def atoms(self) -> frozenset[str]:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def holds(self, interp):
        return self.name in interp

    def atoms(self):
        return frozenset((self.name,))

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const(Formula):
    value: bool

    def holds(self, interp):
        return self.value

    def atoms(self):
        return frozenset()

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula

    def holds(self, interp):
        return not self.arg.holds(interp)

    def atoms(self):
        return self.arg.atoms()

    def __str__(self):
        return f"not {_wrap(self.arg)}"


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def holds(self, interp):
        return all(f.holds(interp) for f in self.args)

    def atoms(self):
        return frozenset().union(*(f.atoms() for f in self.args))

    def __str__(self):
        return " & ".join(_wrap(f) for f in self.args) if self.args else "true"


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))

    def holds(self, interp):
        return any(f.holds(interp) for f in self.args)

    def atoms(self):
        return frozenset().union(*(f.atoms() for f in self.args))

    def __str__(self):
        return " | ".join(_wrap(f) for f in self.args) if self.args else "false"


@dataclass(frozen=True)
class Implies(Formula):
    lhs: Formula
    rhs: Formula

    def holds(self, interp):
        return not self.lhs.holds(interp) or self.rhs.holds(interp)

    def atoms(self):
        return self.lhs.atoms() | self.rhs.atoms()

    def __str__(self):
        return f"{_wrap(self.lhs)} -> {_wrap(self.rhs)}"


def _wrap(f: Formula) -> str:
    return str(f) if isinstance(f, (Atom, Const, Not)) else f"({f})"


def is_literal(f: Formula) -> bool:
    return isinstance(f, Atom) or (isinstance(f, Not) and isinstance(f.arg, Atom))


def is_clause(f: Formula) -> bool:
    return is_literal(f) or (isinstance(f, Or) and all(is_literal(g) for g in f.args))


def is_conjunction(f: Formula) -> bool:
    """A conjunction of literals, the shape of weak-constraint bodies."""
    return is_literal(f) or (isinstance(f, And) and all(is_literal(g) for g in f.args))


def literal(atom: str, positive: bool = True) -> Formula:
    return Atom(atom) if positive else Not(Atom(atom))


def clause(*lits: str) -> Formula:
    """``clause("a", "-b")`` is ``a | not b``."""
    return Or(tuple(literal(s.lstrip("-"), not s.startswith("-")) for s in lits))


def conjunction(pos: Iterable[str] = (), neg: Iterable[str] = ()) -> Formula:
    return And(tuple(Atom(a) for a in pos) + tuple(Not(Atom(a)) for a in neg))


def eval_prop_formula(f: Formula, interp: Iterable[str]) -> bool:
    return f.holds(frozenset(interp))


# -- logic programs ------------------------------------------------------------


@dataclass(frozen=True)
class Rule:
    """``head <- pos, not neg``; a ``None`` head is the empty head (a constraint)."""

    head: str | None
    pos: tuple[str, ...] = ()
    neg: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "pos", tuple(self.pos))
        object.__setattr__(self, "neg", tuple(self.neg))

    def atoms(self) -> frozenset[str]:
        head = () if self.head is None else (self.head,)
        return frozenset(head + self.pos + self.neg)

    def body_holds(self, interp: frozenset) -> bool:
        return all(a in interp for a in self.pos) and not any(a in interp for a in self.neg)

    def satisfied(self, interp: frozenset) -> bool:
        if not self.body_holds(interp):
            return True
        return self.head is not None and self.head in interp

    def __str__(self):
        body = ", ".join(list(self.pos) + [f"not {a}" for a in self.neg])
        head = self.head or ""
        if not body:
            return f"{head}."
        return f"{head} :- {body}." if head else f":- {body}."


Program = Sequence[Rule]


def program_atoms(program: Program) -> list[str]:
    seen: dict[str, None] = {}
    for r in program:
        for a in ((r.head,) if r.head else ()) + r.pos + r.neg:
            seen.setdefault(a, None)
    return list(seen)


def heads(program: Program) -> frozenset[str]:
    return frozenset(r.head for r in program if r.head is not None)


def reduct(program: Program, interp: Iterable[str]) -> list[Rule]:
    interp = frozenset(interp)
    return [Rule(r.head, r.pos) for r in program if not any(a in interp for a in r.neg)]


def least_model_positive(program: Program) -> frozenset:
    """Least fixpoint of the one-step consequence operator.

    Rules with an empty head never derive anything; callers check them.
    """
    if any(r.neg for r in program):
        raise ValueError("least model is defined for positive programs only")
    model: set[str] = set()
    pending = [r for r in program if r.head is not None]
    changed = True
    while changed:
        changed = False
        rest = []
        for r in pending:
            if all(a in model for a in r.pos):
                if r.head not in model:
                    model.add(r.head)
                    changed = True
            else:
                rest.append(r)
        pending = rest
    return frozenset(model)


def is_answer_set(program: Program, interp: Iterable[str]) -> bool:
    interp = frozenset(interp)
    if not all(r.satisfied(interp) for r in program):
        return False
    return least_model_positive(reduct(program, interp)) == interp


def is_input_answer_set(program: Program, vocab: Vocabulary | Iterable[str], interp: Iterable[str]) -> bool:
    interp = frozenset(interp)
    if not interp <= frozenset(vocab):
        return False
    facts = [Rule(a) for a in sorted(interp - heads(program))]
    return is_answer_set(list(program) + facts, interp)


def is_cas_answer_set(
    program: Program,
    interp: Iterable[str],
    vocab: Vocabulary,
) -> bool:
    """The two propositional conditions on a CAS answer set (the CSP one aside)."""
    interp = frozenset(interp)
    if not interp <= vocab.atom_set:
        return False
    if not (interp & vocab.regular) <= heads(program):
        return False
    return is_input_answer_set(program, vocab, interp)


def is_cas_extended_answer_set(
    program: Program,
    denotation: Denotation,
    interp: Iterable[str],
    nu: Mapping[str, int],
    vocab: Vocabulary | None = None,
    spec: Specification | None = None,
    strict: bool = True,
) -> bool:
    """``(interp, nu)`` is an extended answer set of a CAS program.

    ``vocab`` is the program's vocabulary (default: its atoms, typed by the
    denotation); its constraint atoms are the ones the CSP condition ranges over.
    """
    if vocab is None:
        vocab = _default_vocabulary(program_atoms(program), denotation)
    interp = frozenset(interp)
    if not is_cas_answer_set(program, interp, vocab):
        return False
    scope = [a for a in vocab.atoms if a in vocab.constraint_atoms]
    return all(c.satisfied(nu) for c in csp_side_condition(scope, interp, denotation, strict, spec))


def is_smt_extended_model(
    formulas: Iterable[Formula],
    denotation: Denotation,
    interp: Iterable[str],
    nu: Mapping[str, int],
    vocab: Vocabulary | None = None,
    spec: Specification | None = None,
    strict: bool = True,
) -> bool:
    formulas = list(formulas)
    if vocab is None:
        atoms = sorted(frozenset().union(*(f.atoms() for f in formulas))) if formulas else []
        vocab = _default_vocabulary(atoms, denotation)
    interp = frozenset(interp)
    if not interp <= vocab.atom_set or not all(f.holds(interp) for f in formulas):
        return False
    scope = [a for a in vocab.atoms if a in vocab.constraint_atoms]
    return all(c.satisfied(nu) for c in csp_side_condition(scope, interp, denotation, strict, spec))


def _default_vocabulary(atoms: Iterable[str], denotation: Denotation) -> Vocabulary:
    atoms = list(atoms)
    return Vocabulary(tuple(atoms), frozenset(a for a in atoms if a in denotation))


# -- e-modules -----------------------------------------------------------------


class EModule:
    """A theory of some extended logic together with its signature.

    Subclasses implement :meth:`_sem` for extended interpretations over
    exactly their own signature; :meth:`contains` first projects away
    anything outside it.  Membership is memoized since modules are immutable.
    """

    logic = "abstract"

    def __init__(self, vocabulary: Vocabulary, specification: Specification):
        self.vocabulary = vocabulary
        self.specification = specification
        self._atoms = vocabulary.atom_set
        self._vars = specification.variables
        self._cache: dict = {}
        self._model_cache: dict = {}

    def _sem(self, interp: frozenset, nu: Evaluation) -> bool:
        raise NotImplementedError

    def contains(self, interp: Iterable[str], nu: Mapping[str, int] = EMPTY_EVALUATION) -> bool:
        """Whether ``(interp, nu)`` projected to this signature is in the semantics."""
        i = self._atoms.intersection(interp)
        values = tuple(nu[v] for v in self._vars)
        key = (i, values)
        hit = self._cache.get(key)
        if hit is None:
            doms = self.specification.domains
            if any(x not in d for x, d in zip(values, doms)):
                hit = False
            else:
                hit = bool(self._sem(i, Evaluation(zip(self._vars, values))))
            self._cache[key] = hit
        return hit

    def has_model(self, interp: Iterable[str]) -> bool:
        """Whether the projection of ``interp`` is a model, i.e. some evaluation extends it."""
        i = self._atoms.intersection(interp)
        hit = self._model_cache.get(i)
        if hit is None:
            hit = any(self.contains(i, nu) for nu in enumerate_evaluations(self.specification))
            self._model_cache[i] = hit
        return hit

    def extended_members(self) -> Iterator[tuple[frozenset, Evaluation]]:
        for i in enumerate_interpretations(self.vocabulary):
            for nu in enumerate_evaluations(self.specification):
                if self.contains(i, nu):
                    yield i, nu

    def same_signature(self, other: EModule) -> bool:
        return self.vocabulary.atom_set == other.vocabulary.atom_set and self.specification.domain_map() == other.specification.domain_map()

    def describe(self) -> str:
        return self.logic

    def __repr__(self):
        return f"<{type(self).__name__} {self.describe()}>"


class PLModule(EModule):
    """Propositional theory; ``clausal=True`` restricts it to clauses (sat-logic)."""

    def __init__(self, formulas: Iterable[Formula], vocabulary: Vocabulary | None = None, clausal: bool = False):
        self.formulas = tuple(formulas)
        atoms = frozenset().union(*(f.atoms() for f in self.formulas)) if self.formulas else frozenset()
        if vocabulary is None:
            vocabulary = Vocabulary(tuple(sorted(atoms)))
        elif not atoms <= vocabulary.atom_set:
            raise ValueError(f"formula atoms {sorted(atoms - vocabulary.atom_set)} are outside the vocabulary")
        if clausal and not all(is_clause(f) for f in self.formulas):
            raise ValueError("sat-logic theories contain clauses only")
        self.clausal = clausal
        self.logic = "sat" if clausal else "pl"
        super().__init__(vocabulary, Specification())

    def _sem(self, interp, nu):
        return all(f.holds(interp) for f in self.formulas)

    def describe(self):
        return "; ".join(map(str, self.formulas)) or "true"


class LPModule(EModule):
    """Logic program under answer set (or, with ``input=True``, input answer set) semantics."""

    def __init__(self, rules: Iterable[Rule], vocabulary: Vocabulary | None = None, input: bool = False):
        self.rules = tuple(rules)
        if vocabulary is None:
            vocabulary = Vocabulary(tuple(program_atoms(self.rules)))
        outside = set(program_atoms(self.rules)) - vocabulary.atom_set
        if outside:
            raise ValueError(f"program atoms {sorted(outside)} are outside the vocabulary")
        self.input = input
        self.logic = "lp-input" if input else "lp"
        super().__init__(vocabulary, Specification())

    def _sem(self, interp, nu):
        if self.input:
            return is_input_answer_set(self.rules, self.vocabulary, interp)
        return is_answer_set(self.rules, interp)

    def describe(self):
        return " ".join(map(str, self.rules))


class ICSPModule(EModule):
    """Integer CSP: members are ``(∅, nu)`` for every solution ``nu``."""

    logic = "icsp"

    def __init__(self, constraints: Iterable[Constraint], specification: Specification):
        self.constraints = tuple(constraints)
        problems = [p for c in self.constraints for p in check_constraint(c, specification)]
        if problems:
            raise ValueError("; ".join(problems))
        super().__init__(Vocabulary(), specification)

    def _sem(self, interp, nu):
        return is_icsp_solution(self.constraints, nu, interp)

    def describe(self):
        return "; ".join(map(str, self.constraints)) or "true"


class _DenotedModule(EModule):
    def __init__(self, vocabulary, specification, denotation, strict):
        problems = []
        for a in vocabulary.constraint_atoms:
            if a not in denotation:
                problems.append(f"constraint atom {a!r} has no denotation")
            else:
                problems.extend(check_constraint(denotation[a], specification))
        if problems:
            raise ValueError("; ".join(problems))
        self.denotation = {a: denotation[a] for a in vocabulary.atoms if a in vocabulary.constraint_atoms}
        self.strict = strict
        self._scope = [a for a in vocabulary.atoms if a in vocabulary.constraint_atoms]
        super().__init__(vocabulary, specification)

    def _csp_holds(self, interp, nu):
        side = csp_side_condition(self._scope, interp, self.denotation, self.strict, self.specification)
        return all(c.satisfied(nu) for c in side)


class SMTModule(_DenotedModule):
    """SMT formula: propositional formulas whose constraint atoms carry constraints.

    ``restricted=True`` demands conjunctions of literals (the RSMT logic).
    """

    def __init__(
        self,
        formulas: Iterable[Formula],
        vocabulary: Vocabulary,
        specification: Specification,
        denotation: Denotation,
        strict: bool = True,
        restricted: bool = False,
    ):
        self.formulas = tuple(formulas)
        atoms = frozenset().union(*(f.atoms() for f in self.formulas)) if self.formulas else frozenset()
        if not atoms <= vocabulary.atom_set:
            raise ValueError(f"formula atoms {sorted(atoms - vocabulary.atom_set)} are outside the vocabulary")
        if restricted and not all(is_conjunction(f) for f in self.formulas):
            raise ValueError("RSMT theories contain conjunctions of literals only")
        self.restricted = restricted
        self.logic = "rsmt" if restricted else "smt"
        super().__init__(vocabulary, specification, denotation, strict)

    def _sem(self, interp, nu):
        return all(f.holds(interp) for f in self.formulas) and self._csp_holds(interp, nu)

    def describe(self):
        return "; ".join(map(str, self.formulas)) or "true"


class CASModule(_DenotedModule):
    """CAS program under extended answer set semantics.

    The CSP condition ranges over every constraint atom of the module
    vocabulary, which defaults to the atoms occurring in the rules.
    """

    logic = "cas"

    def __init__(
        self,
        rules: Iterable[Rule],
        vocabulary: Vocabulary,
        specification: Specification,
        denotation: Denotation,
        strict: bool = True,
    ):
        self.rules = tuple(rules)
        outside = set(program_atoms(self.rules)) - vocabulary.atom_set
        if outside:
            raise ValueError(f"program atoms {sorted(outside)} are outside the vocabulary")
        bad_heads = [r.head for r in self.rules if r.head is not None and r.head in vocabulary.constraint_atoms]
        if bad_heads:
            raise ValueError(f"CAS rule heads must be regular atoms: {bad_heads}")
        super().__init__(vocabulary, specification, denotation, strict)

    def _sem(self, interp, nu):
        return is_cas_answer_set(self.rules, interp, self.vocabulary) and self._csp_holds(interp, nu)

    def describe(self):
        return " ".join(map(str, self.rules))
