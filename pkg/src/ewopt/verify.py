"""Randomized cross-checks of the formal properties of ew-systems.

Each trial draws a small system from a seeded generator and runs every check
on it.  The report is a pure function of the parameters.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .core import Specification, Vocabulary, enumerate_evaluations, enumerate_interpretations
from .ewsys import (
    MAX,
    MIN,
    SENSES,
    ComplementModule,
    EwCondition,
    EwSystem,
    ExplicitModule,
    UniversalModule,
    level_cost,
    level_cost_extended,
    levels,
)
from .frontends.asp import (
    clingcon3_optimal_direct,
    lower_clingcon3,
    lower_oprogram,
    optimal_answer_sets_direct,
    parse_casp,
    parse_oprogram,
)
from .frontends.smt import lower_gpw, parse_gpw, weighted_maxsmt_solutions_direct
from .logics import (
    CASModule,
    ICSPModule,
    Extensional,
    Linear,
    LPModule,
    PLModule,
    Rule,
    SMTModule,
    And,
    Atom,
    Implies,
    Not,
    Or,
    complement_constraint,
    conjunction,
)
from .solver import (
    enumerate_extended_models,
    enumerate_models,
    optimal_extended_models,
    optimal_extended_models_by_domination,
    optimal_models,
    optimal_models_by_domination,
)
from .transforms import (
    MINUS,
    MINUS_EXT,
    PLUS,
    PLUS_EXT,
    drop_inert,
    drop_zero_weight,
    eliminate_weights_by_sign,
    normalize_levels,
    remove_conditions,
    replace_modules,
    star,
    star_star,
    zero_coefficients,
)

STATED, GUARDED = "stated", "guarded"


@dataclass(frozen=True)
class RandomSystemParams:
    """Knobs of the random system generator.

    ``sign_checks`` selects how the weight-sign elimination checks run:
    ``"stated"`` asserts invariance on every system, ``"guarded"`` only on
    systems whose flipped conditions meet the hypotheses under which the
    invariance is provable (see :func:`sign_elimination_applies`).
    """

    seed: int = 0
    max_atoms: int = 6
    max_vars: int = 3
    max_domain: int = 4
    max_soft: int = 6
    weight_range: tuple[int, int] = (-4, 4)
    level_range: tuple[int, int] = (1, 3)
    coefficient_range: tuple[int, int] = (-3, 3)
    max_states: int = 256
    sign_checks: str = STATED

    def __post_init__(self):
        if not 1 <= self.max_atoms <= 6:
            raise ValueError("max_atoms must be in 1..6")
        if not 0 <= self.max_vars <= 3:
            raise ValueError("max_vars must be in 0..3")
        if not 1 <= self.max_domain <= 4:
            raise ValueError("max_domain must be in 1..4")
        if not 0 <= self.max_soft <= 6:
            raise ValueError("max_soft must be in 0..6")
        for name in ("weight_range", "level_range", "coefficient_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty")
        if self.level_range[0] < 1:
            raise ValueError("levels are positive")
        if self.max_states < 2:
            raise ValueError("max_states must allow at least one atom (2 states)")
        if self.sign_checks not in (STATED, GUARDED):
            raise ValueError(f"sign_checks is {STATED!r} or {GUARDED!r}")


# -- generator --------------------------------------------------------------------------


def _random_constraint(rng: random.Random, spec: Specification):
    variables = list(spec.variables)
    if rng.random() < 0.3:
        v = rng.choice(variables)
        dom = spec.domain(v)
        allowed = [d for d in dom if rng.random() < 0.5]
        return Extensional((v,), frozenset((d,) for d in allowed))
    chosen = rng.sample(variables, rng.randint(1, min(2, len(variables))))
    terms = tuple((rng.choice([-2, -1, 1, 2]), v) for v in chosen)
    return Linear(terms, rng.choice(["<", "<=", "=", "!=", ">=", ">"]), rng.randint(-2, 2))


def _random_formula(rng: random.Random, atoms: list[str], depth: int = 2):
    if depth == 0 or rng.random() < 0.35:
        f = Atom(rng.choice(atoms))
        return Not(f) if rng.random() < 0.4 else f
    kind = rng.choice(["and", "or", "or", "implies", "not"])
    if kind == "not":
        return Not(_random_formula(rng, atoms, depth - 1))
    if kind == "implies":
        return Implies(_random_formula(rng, atoms, depth - 1), _random_formula(rng, atoms, depth - 1))
    args = tuple(_random_formula(rng, atoms, depth - 1) for _ in range(rng.randint(2, 3)))
    return And(args) if kind == "and" else Or(args)


def _random_rules(rng: random.Random, atoms: list[str], heads: list[str], n: int) -> list[Rule]:
    rules = []
    for _ in range(n):
        head = rng.choice(heads) if heads and rng.random() < 0.85 else None
        body = rng.sample(atoms, rng.randint(0, min(2, len(atoms))))
        pos = tuple(a for a in body if rng.random() < 0.5)
        neg = tuple(a for a in body if a not in pos)
        if head is None and not body:
            continue
        rules.append(Rule(head, pos, neg))
    return rules


@dataclass
class _Signature:
    vocab: Vocabulary
    spec: Specification
    denotation: dict
    strict: bool

    def sub_vocab(self, atoms) -> Vocabulary:
        return self.vocab.restrict(atoms)

    def vars_of(self, atoms) -> list[str]:
        out = []
        for a in atoms:
            if a in self.denotation:
                out.extend(v for v in self.denotation[a].variables if v not in out)
        return out


def _signature(rng: random.Random, p: RandomSystemParams) -> _Signature:
    n_atoms = rng.randint(1, p.max_atoms)
    n_vars = rng.randint(0, p.max_vars)
    domains = {}
    for i in range(n_vars):
        k = rng.randint(1, p.max_domain)
        domains[f"x{i}"] = sorted(rng.sample(range(-3, 4), k))
    spec = Specification.of(domains)
    while (1 << n_atoms) * spec.size() > p.max_states:
        if spec.variables and (n_atoms <= 2 or rng.random() < 0.5):
            spec = spec.restrict(spec.variables[:-1])
        else:
            n_atoms -= 1
    atoms = [f"p{i}" for i in range(n_atoms)]
    denotation = {}
    if spec.variables:
        for a in atoms:
            if rng.random() < 0.4:
                denotation[a] = _random_constraint(rng, spec)
    if len(denotation) == len(atoms) and denotation:
        denotation.pop(atoms[0])
    vocab = Vocabulary(tuple(atoms), frozenset(denotation))
    return _Signature(vocab, spec, denotation, strict=rng.random() < 0.75)


def _random_hard(rng: random.Random, s: _Signature) -> list:
    atoms = list(s.vocab.atoms)
    regular = [a for a in atoms if a not in s.denotation]
    kind = rng.choice(["smt", "smt", "cas", "universal", "pl+icsp"])
    if kind == "smt":
        formulas = [_random_formula(rng, atoms, 1) for _ in range(rng.randint(0, 2))]
        mods = [SMTModule(formulas, s.vocab, s.spec, s.denotation, s.strict)]
    elif kind == "cas":
        rules = _random_rules(rng, atoms, regular, rng.randint(1, 4))
        mods = [CASModule(rules, s.vocab, s.spec, s.denotation, s.strict)]
    elif kind == "universal":
        mods = [UniversalModule(s.vocab, s.spec)]
    else:
        formulas = [_random_formula(rng, atoms, 1) for _ in range(rng.randint(0, 1))]
        mods = [PLModule(formulas, s.vocab)]
        if s.spec.variables:
            mods.append(ICSPModule([_random_constraint(rng, s.spec)] if rng.random() < 0.5 else [], s.spec))
    if regular and rng.random() < 0.25:
        sub = rng.sample(regular, rng.randint(1, len(regular)))
        mods.append(LPModule(_random_rules(rng, sub, sub, rng.randint(0, 2)), s.sub_vocab(sub), input=True))
    return mods


def _random_soft_module(rng: random.Random, s: _Signature):
    atoms = list(s.vocab.atoms)
    regular = [a for a in atoms if a not in s.denotation]
    kinds = ["smt", "rsmt", "universal", "pl"]
    if s.spec.variables:
        kinds += ["icsp", "universal-vars"]
    if regular:
        kinds.append("cas")
    kind = rng.choice(kinds)
    if kind in ("smt", "rsmt"):
        if kind == "smt":
            f = _random_formula(rng, atoms, 2)
        else:
            chosen = rng.sample(atoms, rng.randint(1, min(3, len(atoms))))
            pos = [a for a in chosen if rng.random() < 0.6]
            f = conjunction(pos, [a for a in chosen if a not in pos])
        used = [a for a in atoms if a in f.atoms()]
        variables = s.vars_of(used)
        extra = [v for v in s.spec.variables if v not in variables and rng.random() < 0.3]
        spec = s.spec.restrict(variables + extra)
        m = SMTModule([f], s.sub_vocab(used), spec, s.denotation, s.strict, restricted=kind == "rsmt")
    elif kind == "pl":
        f = _random_formula(rng, atoms, 2)
        m = PLModule([f], s.sub_vocab([a for a in atoms if a in f.atoms()]))
    elif kind == "universal":
        m = UniversalModule(s.sub_vocab(rng.sample(atoms, rng.randint(0, len(atoms)))),
                            s.spec.restrict(rng.sample(list(s.spec.variables), rng.randint(0, len(s.spec.variables)))))
    elif kind == "universal-vars":
        m = UniversalModule(Vocabulary(), s.spec)
    elif kind == "icsp":
        c = _random_constraint(rng, s.spec)
        m = ICSPModule([c], s.spec.restrict(c.variables))
    else:
        sub = rng.sample(atoms, rng.randint(1, len(atoms)))
        heads = [a for a in sub if a not in s.denotation]
        rules = _random_rules(rng, sub, heads, rng.randint(0, 3))
        m = CASModule(rules, s.sub_vocab(sub), s.spec.restrict(s.vars_of(sub)), s.denotation, s.strict)
    if rng.random() < 0.15:
        m = ComplementModule(m)
    return m


def _coefficients(rng: random.Random, m, p: RandomSystemParams) -> dict:
    if rng.random() < 0.4:
        return {}
    lo, hi = p.coefficient_range
    return {v: Fraction(rng.randint(lo, hi), rng.choice([1, 1, 2])) for v in m.specification.variables if rng.random() < 0.7}


def random_system(rng: random.Random, p: RandomSystemParams) -> EwSystem:
    s = _signature(rng, p)
    hard = _random_hard(rng, s)
    soft = []
    for _ in range(rng.randint(0, p.max_soft)):
        m = _random_soft_module(rng, s)
        soft.append(EwCondition(m, rng.randint(*p.weight_range), _coefficients(rng, m, p), rng.randint(*p.level_range)))
    return EwSystem(hard, soft)


def dump_system(system: EwSystem) -> str:
    """A readable listing of a system, enough to rebuild it by hand."""
    vocab, spec = system.vocabulary, system.specification
    lines = [
        "atoms: " + " ".join(f"{a}{'*' if a in vocab.constraint_atoms else ''}" for a in vocab.atoms),
        "variables: " + " ".join(f"{v}{list(spec.domain(v))}" for v in spec.variables),
    ]
    denot = {}
    for m in list(system.hard.modules) + [b.module for b in system.soft]:
        inner = m.inner if isinstance(m, ComplementModule) else m
        denot.update(getattr(inner, "denotation", {}))
    lines += [f"  {a} := {c}" for a, c in denot.items()]
    for m in system.hard.modules:
        strict = getattr(m, "strict", None)
        tag = "" if strict is None else (" strict" if strict else " nonstrict")
        lines.append(f"hard {m.logic}{tag} [{','.join(m.vocabulary.atoms)};{','.join(m.specification.variables)}]: {m.describe()}")
    for b in system.soft:
        m = b.module
        lines.append(f"soft {m.logic} [{','.join(m.vocabulary.atoms)};{','.join(m.specification.variables)}] {b!r}")
    return "\n".join(lines)


# -- checks --------------------------------------------------------------------------------


class _Ctx:
    """Memoized optimal sets of a system under test."""

    def __init__(self, system: EwSystem):
        self.system = system
        self.ext = enumerate_extended_models(system)
        self.models = enumerate_models(system, extended_models=self.ext)

    def plain(self, system: EwSystem, sense: str) -> frozenset:
        return frozenset(optimal_models(system, sense, models=self.models))

    def extended(self, system: EwSystem, sense: str) -> frozenset:
        return frozenset(optimal_extended_models(system, sense, extended_models=self.ext))


def _fmt(items) -> str:
    out = []
    for x in sorted(items, key=repr):
        if isinstance(x, tuple):
            out.append(f"({sorted(x[0])}, {dict(x[1])})")
        else:
            out.append(str(sorted(x)))
    return "{" + ", ".join(out) + "}"


def _same(label: str, a, b) -> list[str]:
    if a == b:
        return []
    return [f"{label}: {_fmt(a)} != {_fmt(b)}"]


def check_definitions(ctx: _Ctx, rng) -> list[str]:
    errs = []
    w = ctx.system
    for sense in SENSES:
        a = ctx.plain(w, sense)
        errs += _same(f"plain {sense} argopt vs domination", a, frozenset(optimal_models_by_domination(w, sense, models=ctx.models)))
        if ctx.models and not a:
            errs.append(f"plain {sense}: no optimal model although models exist")
        e = ctx.extended(w, sense)
        errs += _same(f"extended {sense} argopt vs domination", e,
                      frozenset(optimal_extended_models_by_domination(w, sense, extended_models=ctx.ext)))
        if ctx.ext and not e:
            errs.append(f"extended {sense}: no optimal extended model although extended models exist")
    return errs


def check_duality(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    errs = []
    for sense, other in ((MAX, MIN), (MIN, MAX)):
        errs += _same(f"star plain {sense}/{other}", ctx.plain(w, sense), ctx.plain(star(w), other))
        errs += _same(f"star-star extended {sense}/{other}", ctx.extended(w, sense), ctx.extended(star_star(w), other))
    return errs


def evaluation_independent(module) -> bool:
    """Whether membership of ``(I, nu)`` never depends on ``nu`` (plain models of T and its complement partition)."""
    evals = list(enumerate_evaluations(module.specification))
    for i in enumerate_interpretations(module.vocabulary):
        seen = {module.contains(i, nu) for nu in evals}
        if len(seen) > 1:
            return False
    return True


def _flipped(w: EwSystem, variant: str):
    if variant in (PLUS, PLUS_EXT):
        return [b for b in w.soft if b.weight < 0]
    return [b for b in w.soft if b.weight > 0]


def sign_elimination_applies(w: EwSystem, variant: str, extended: bool) -> bool:
    """Hypotheses under which moving a weight onto a complement provably keeps optima.

    Plain optima: each flipped module is evaluation independent, so ``I`` is a
    model of exactly one of ``T`` and its complement.  Extended optima need in
    addition that flipped conditions carry no nonzero coefficient, since the
    ``c`` part contributes ``c . nu`` to the difference of the two costs.
    """
    flipped = _flipped(w, variant)
    if not all(evaluation_independent(b.module) for b in flipped):
        return False
    return not extended or all(b.plain for b in flipped)


def _sign_check(ctx: _Ctx, variants, extended: bool, guarded: bool) -> tuple[list[str], bool]:
    w = ctx.system
    errs, ran = [], False
    for variant in variants:
        if guarded and not sign_elimination_applies(w, variant, extended):
            continue
        ran = True
        t = eliminate_weights_by_sign(w, variant)
        for sense in SENSES:
            if extended:
                errs += _same(f"sign {variant} extended {sense}", ctx.extended(w, sense), ctx.extended(t, sense))
            else:
                errs += _same(f"sign {variant} plain {sense}", ctx.plain(w, sense), ctx.plain(t, sense))
    return errs, ran


def check_level_normalization(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    n = normalize_levels(w)
    errs = []
    if levels(n) != list(range(1, len(levels(w)) + 1)):
        errs.append(f"normalized levels {levels(n)}")
    for sense in SENSES:
        errs += _same(f"normalized plain {sense}", ctx.plain(w, sense), ctx.plain(n, sense))
        errs += _same(f"normalized extended {sense}", ctx.extended(w, sense), ctx.extended(n, sense))
    return errs


def check_same_hard(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    other = EwSystem(w.hard, [])
    errs = _same("extended models with and without soft part", frozenset(ctx.ext), frozenset(enumerate_extended_models(other)))
    errs += _same("models with and without soft part", frozenset(ctx.models), frozenset(enumerate_models(star_star(w))))
    return errs


def check_empty_soft(ctx: _Ctx, rng) -> list[str]:
    empty = EwSystem(ctx.system.hard, [])
    errs = []
    for sense in SENSES:
        errs += _same(f"empty soft plain {sense}", ctx.plain(empty, sense), frozenset(ctx.models))
        errs += _same(f"empty soft extended {sense}", ctx.extended(empty, sense), frozenset(ctx.ext))
    return errs


def check_zero_weight(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    d = drop_zero_weight(w)
    return [e for sense in SENSES for e in _same(f"drop zero weight plain {sense}", ctx.plain(w, sense), ctx.plain(d, sense))]


def check_zero_coefficients(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    z = zero_coefficients(w)
    return [e for sense in SENSES for e in _same(f"zero coefficients plain {sense}", ctx.plain(w, sense), ctx.plain(z, sense))]


def check_special_form(ctx: _Ctx, rng) -> list[str]:
    z = zero_coefficients(ctx.system)
    errs = []
    for sense in SENSES:
        plain = ctx.plain(z, sense)
        expected = frozenset(e for e in ctx.ext if e.interpretation in plain)
        errs += _same(f"special form {sense}", ctx.extended(z, sense), expected)
    return errs


def check_inert(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    d = drop_inert(w)
    return [e for sense in SENSES for e in _same(f"drop inert extended {sense}", ctx.extended(w, sense), ctx.extended(d, sense))]


def check_equivalent_theories(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    t = replace_modules(w, ExplicitModule.tabulate)
    fresh = _Ctx(t)
    errs = _same("tabulated extended models", frozenset(ctx.ext), frozenset(fresh.ext))
    for sense in SENSES:
        errs += _same(f"tabulated plain {sense}", ctx.plain(w, sense), fresh.plain(t, sense))
        errs += _same(f"tabulated extended {sense}", ctx.extended(w, sense), fresh.extended(t, sense))
    return errs


def check_all_optimal(ctx: _Ctx, rng) -> list[str]:
    """Constant level sums make every (extended) model optimal, on ``W`` when it qualifies and on a built instance."""
    w = ctx.system
    errs = []
    ls = levels(w)
    if all(len({level_cost(i, w, l) for i in ctx.models}) <= 1 for l in ls):
        for sense in SENSES:
            errs += _same(f"constant plain sums {sense}", ctx.plain(w, sense), frozenset(ctx.models))
    if all(len({level_cost_extended(i, nu, w, l) for i, nu in ctx.ext}) <= 1 for l in ls):
        for sense in SENSES:
            errs += _same(f"constant extended sums {sense}", ctx.extended(w, sense), frozenset(ctx.ext))
    flat = w.with_soft(b.replace(module=UniversalModule(b.module.vocabulary, Specification()), coefficients={}) for b in w.soft)
    for sense in SENSES:
        errs += _same(f"universal conditions plain {sense}", ctx.plain(flat, sense), frozenset(ctx.models))
        errs += _same(f"universal conditions extended {sense}", ctx.extended(flat, sense), frozenset(ctx.ext))
    return errs


def _survivors(system: EwSystem, items, cost, sense, above: int):
    for level in reversed(levels(system)):
        if level <= above or not items:
            break
        costs = [cost(x, level) for x in items]
        best = max(costs) if sense == MAX else min(costs)
        items = [x for x, c in zip(items, costs) if c == best]
    return items


def check_same_w_cond(ctx: _Ctx, rng) -> list[str]:
    """Dropping a same-level set whose sums tie among the survivors of the greater levels."""
    w = ctx.system
    errs = []
    for level in levels(w):
        at = w.at_level(level)
        subset = [b for b in at if rng.random() < 0.6] or at[:1]
        for sense in SENSES:
            surv = _survivors(w, ctx.models, lambda i, l: level_cost(i, w, l), sense, level)
            if len({sum(w_.weight for w_ in subset if w_.weight and w_.module.has_model(i)) for i in surv}) <= 1:
                errs += _same(f"drop tied set at {level} plain {sense}", ctx.plain(w, sense), ctx.plain(remove_conditions(w, subset), sense))
            surv = _survivors(w, ctx.ext, lambda e, l: level_cost_extended(*e, w, l), sense, level)
            sub = EwSystem(w.hard, subset, check=False)
            if len({level_cost_extended(*e, sub, level) for e in surv}) <= 1:
                errs += _same(f"drop tied set at {level} extended {sense}", ctx.extended(w, sense),
                              ctx.extended(remove_conditions(w, subset), sense))
    return errs


def check_complements(ctx: _Ctx, rng) -> list[str]:
    w = ctx.system
    errs = []
    denot = {}
    modules = list(w.hard.modules) + [b.module for b in w.soft]
    for m in modules:
        inner = m.inner if isinstance(m, ComplementModule) else m
        denot.update(getattr(inner, "denotation", {}))
    spec = w.specification
    for a, c in denot.items():
        sub = spec.restrict(c.variables)
        comp = complement_constraint(c, sub)
        for nu in enumerate_evaluations(sub):
            if c.satisfied(nu) == comp.satisfied(nu):
                errs.append(f"constraint {c} and its complement {comp} agree on {dict(nu)}")
                break
    for b in w.soft:
        m = b.module
        comp = ComplementModule(m)
        for i in enumerate_interpretations(m.vocabulary):
            for nu in enumerate_evaluations(m.specification):
                if m.contains(i, nu) == comp.contains(i, nu):
                    errs.append(f"module {m.describe()} and its complement agree on {sorted(i)}, {dict(nu)}")
    return errs


# -- dialect two-path checks ---------------------------------------------------------------


def _gpw_text(rng: random.Random) -> str:
    lines = []
    n_vars = rng.randint(0, 2)
    for i in range(n_vars):
        lo = rng.randint(-2, 1)
        lines.append(f"var x{i} int {lo} {lo + rng.randint(0, 2)}")
    atoms = []
    regular = [f"a{i}" for i in range(rng.randint(1, 3))]
    lines.append("bool " + " ".join(regular))
    atoms += regular
    for i in range(rng.randint(0, 2) if n_vars else 0):
        v = f"x{rng.randrange(n_vars)}"
        lines.append(f"atom c{i} := {rng.choice(['', '-', '2*'])}{v} {rng.choice(['<', '<=', '=', '!=', '>='])} {rng.randint(-1, 1)}")
        atoms.append(f"c{i}")
    for _ in range(rng.randint(1, 4)):
        lits = [("not " if rng.random() < 0.5 else "") + rng.choice(atoms) for _ in range(rng.randint(1, 3))]
        lines.append(f"assert-soft {' | '.join(lits)} :weight {rng.randint(1, 5)}")
    return "\n".join(lines) + "\n"


def check_maxsmt_two_path(rng: random.Random) -> tuple[list[str], str]:
    text = _gpw_text(rng)
    problem = parse_gpw(text)
    system = lower_gpw(problem)
    direct = frozenset(weighted_maxsmt_solutions_direct(problem.body))
    return _same("weighted MaxSMT lowering vs direct", frozenset(optimal_models(system, MAX)), direct), text


def _cc3_text(rng: random.Random) -> str:
    lines = []
    n_vars = rng.randint(1, 2)
    for i in range(n_vars):
        lo = rng.randint(-1, 1)
        lines.append(f"var x{i} int {lo} {lo + rng.randint(0, 2)}")
    regular = [f"a{i}" for i in range(rng.randint(1, 2))]
    cons = []
    for i in range(rng.randint(0, 2)):
        lines.append(f"atom c{i} := x{rng.randrange(n_vars)} {rng.choice(['<', '>=', '=', '!='])} {rng.randint(-1, 2)}")
        cons.append(f"c{i}")
    atoms = regular + cons
    for _ in range(rng.randint(0, 3)):
        head = rng.choice(regular + [""])
        body = rng.sample(atoms, rng.randint(0 if head else 1, min(2, len(atoms))))
        lits = [("not " if rng.random() < 0.4 else "") + a for a in body]
        lines.append(f"{head} :- {', '.join(lits)}." if body else f"{head}.")
    terms = []
    for level in rng.sample([1, 2, 3], rng.randint(1, 2)):
        for v in rng.sample([f"x{i}" for i in range(n_vars)], rng.randint(1, n_vars)):
            terms.append(f"{rng.randint(-2, 2)}*{v}{rng.randint(-2, 2):+d}@{level}")
    lines.append("$minimize{" + ", ".join(terms) + "}.")
    return "\n".join(lines) + "\n"


def check_clingcon3_two_path(rng: random.Random) -> tuple[list[str], str]:
    text = _cc3_text(rng)
    problem = parse_casp(text, "clingcon3")
    strict = rng.random() < 0.75
    system = lower_clingcon3(problem, strict)
    lowered = frozenset((e.interpretation, e.evaluation) for e in optimal_extended_models(system, MIN))
    direct = frozenset((x, nu) for x, nu in clingcon3_optimal_direct(problem.body, strict))
    return _same(f"clingcon-3 lowering vs direct ({'strict' if strict else 'nonstrict'})", lowered, direct), text


def _oprogram_text(rng: random.Random) -> str:
    atoms = [f"a{i}" for i in range(rng.randint(1, 4))]
    lines = []
    for _ in range(rng.randint(1, 4)):
        head = rng.choice(atoms + [""])
        body = rng.sample(atoms, rng.randint(0 if head else 1, min(2, len(atoms))))
        lits = [("not " if rng.random() < 0.5 else "") + a for a in body]
        lines.append(f"{head} :- {', '.join(lits)}." if body else f"{head}.")
    for _ in range(rng.randint(0, 3)):
        body = rng.sample(atoms, rng.randint(1, min(2, len(atoms))))
        lits = [("not " if rng.random() < 0.4 else "") + a for a in body]
        lines.append(f":~ {', '.join(lits)}. [{rng.randint(-3, 3)}@{rng.randint(1, 2)}]")
    return "\n".join(lines) + "\n"


def check_oprogram_two_path(rng: random.Random) -> tuple[list[str], str]:
    text = _oprogram_text(rng)
    problem = parse_oprogram(text)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        system = lower_oprogram(problem)
    return _same("o-program lowering vs direct", frozenset(optimal_models(system, MIN)),
                 frozenset(optimal_answer_sets_direct(problem.body))), text


# -- driver -------------------------------------------------------------------------------

SYSTEM_CHECKS = {
    "definitions-agree": check_definitions,
    "star-duality": check_duality,
    "level-normalization": check_level_normalization,
    "same-hard-models": check_same_hard,
    "empty-soft-all-optimal": check_empty_soft,
    "drop-zero-weight": check_zero_weight,
    "zero-coefficients": check_zero_coefficients,
    "special-form": check_special_form,
    "drop-inert": check_inert,
    "equivalent-theories": check_equivalent_theories,
    "all-optimal": check_all_optimal,
    "same-w-cond": check_same_w_cond,
    "complement-partition": check_complements,
}
SIGN_CHECKS = {
    "sign-elim-plain": ((PLUS, MINUS, PLUS_EXT, MINUS_EXT), False),
    "sign-elim-extended": ((PLUS_EXT, MINUS_EXT), True),
}
DIALECT_CHECKS = {
    "maxsmt-two-path": check_maxsmt_two_path,
    "clingcon3-two-path": check_clingcon3_two_path,
    "oprogram-two-path": check_oprogram_two_path,
}
CHECK_NAMES = tuple(SYSTEM_CHECKS) + tuple(SIGN_CHECKS) + tuple(DIALECT_CHECKS)


@dataclass
class Failure:
    check: str
    trial: int
    seed: int
    messages: list[str]
    dump: str

    def __str__(self):
        head = f"[{self.check}] trial {self.trial} (seed {self.seed})"
        return "\n".join([head] + [f"  {m}" for m in self.messages[:5]] + ["  system:"] +
                         [f"    {line}" for line in self.dump.splitlines()])


@dataclass
class VerifyReport:
    params: RandomSystemParams
    trials: int
    ran: dict[str, int] = field(default_factory=dict)
    failed: dict[str, int] = field(default_factory=dict)
    failures: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not any(self.failed.values())

    def first_failure(self, check: str | None = None) -> Failure | None:
        for f in self.failures:
            if check is None or f.check == check:
                return f
        return None

    def summary(self) -> str:
        lines = [f"verify: {self.trials} trials, seed {self.params.seed}, sign checks {self.params.sign_checks}"]
        for name in CHECK_NAMES:
            ran, bad = self.ran.get(name, 0), self.failed.get(name, 0)
            lines.append(f"  {'FAIL' if bad else 'ok  '} {name}: {ran - bad}/{ran} passed")
        first = self.first_failure()
        if first:
            lines.append("first counterexample:")
            lines.append(str(first))
        return "\n".join(lines)


def trial_seed(params: RandomSystemParams, trial: int) -> int:
    return params.seed * 1_000_003 + trial


def run_verify(params: RandomSystemParams = RandomSystemParams(), trials: int = 200,
               keep_failures: int = 20) -> VerifyReport:
    """Run every check on ``trials`` random systems; deterministic in ``params``."""
    report = VerifyReport(params, trials, {n: 0 for n in CHECK_NAMES}, {n: 0 for n in CHECK_NAMES})

    def record(name, trial, seed, errs, dump):
        report.ran[name] += 1
        if errs:
            report.failed[name] += 1
            if len(report.failures) < keep_failures:
                report.failures.append(Failure(name, trial, seed, errs, dump()))

    for trial in range(trials):
        seed = trial_seed(params, trial)
        rng = random.Random(seed)
        system = random_system(rng, params)
        ctx = _Ctx(system)
        dump = lambda: dump_system(system)  # noqa: E731
        for name, check in SYSTEM_CHECKS.items():
            record(name, trial, seed, check(ctx, random.Random(f"{seed}:{name}")), dump)
        for name, (variants, extended) in SIGN_CHECKS.items():
            errs, ran = _sign_check(ctx, variants, extended, params.sign_checks == GUARDED)
            if ran:
                record(name, trial, seed, errs, dump)
        for name, check in DIALECT_CHECKS.items():
            errs, text = check(random.Random(f"{seed}:{name}"))
            record(name, trial, seed, errs, lambda: text.rstrip())
    return report
