"""The ``.ews`` JSON document: a canonical, versioned serialization of ew-systems."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .core import Specification, Vocabulary
from .ewsys import MAX, SENSES, ComplementModule, EwCondition, EwSystem, ExplicitModule, UniversalModule
from .logics import (
    And,
    Atom,
    CASModule,
    Const,
    Constraint,
    EModule,
    Extensional,
    Formula,
    ICSPModule,
    Implies,
    Linear,
    LPModule,
    Not,
    Or,
    PLModule,
    Rule,
    SMTModule,
)

VERSION = "ews/1"


class DocumentError(ValueError):
    """Malformed or unsupported ``.ews`` content."""


@dataclass
class EwsDocument:
    system: EwSystem
    sense: str = MAX
    extended: bool = False
    strict: bool = True


def _fields(obj, where: str, required=(), optional=()):
    if not isinstance(obj, dict):
        raise DocumentError(f"{where}: expected an object")
    unknown = set(obj) - set(required) - set(optional)
    if unknown:
        raise DocumentError(f"{where}: unknown fields {sorted(unknown)}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise DocumentError(f"{where}: missing fields {missing}")
    return obj


# -- formulas, rules, constraints ----------------------------------------------------


def formula_to_json(f: Formula):
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return ["not", formula_to_json(f.arg)]
    if isinstance(f, And):
        return ["and", *map(formula_to_json, f.args)]
    if isinstance(f, Or):
        return ["or", *map(formula_to_json, f.args)]
    if isinstance(f, Implies):
        return ["implies", formula_to_json(f.lhs), formula_to_json(f.rhs)]
    raise DocumentError(f"cannot serialize formula {f!r}")


def formula_from_json(x) -> Formula:
    if isinstance(x, bool):
        return Const(x)
    if isinstance(x, str):
        return Atom(x)
    if isinstance(x, list) and x and isinstance(x[0], str):
        op, args = x[0], x[1:]
        if op == "not" and len(args) == 1:
            return Not(formula_from_json(args[0]))
        if op == "and":
            return And(tuple(map(formula_from_json, args)))
        if op == "or":
            return Or(tuple(map(formula_from_json, args)))
        if op == "implies" and len(args) == 2:
            return Implies(formula_from_json(args[0]), formula_from_json(args[1]))
    raise DocumentError(f"bad formula {x!r}")


def rule_to_json(r: Rule):
    return {"head": r.head, "pos": list(r.pos), "neg": list(r.neg)}


def rule_from_json(x) -> Rule:
    _fields(x, "rule", ("head", "pos", "neg"))
    return Rule(x["head"], tuple(x["pos"]), tuple(x["neg"]))


def constraint_to_json(c: Constraint):
    if isinstance(c, Linear):
        return {"linear": [[b, v] for b, v in c.terms], "rel": c.relation, "rhs": c.rhs}
    return {"table": list(c.variables), "allowed": [list(t) for t in sorted(c.allowed)]}


def constraint_from_json(x) -> Constraint:
    if isinstance(x, dict) and "linear" in x:
        _fields(x, "linear constraint", ("linear", "rel", "rhs"))
        return Linear(tuple((b, v) for b, v in x["linear"]), x["rel"], x["rhs"])
    _fields(x, "table constraint", ("table", "allowed"))
    return Extensional(tuple(x["table"]), frozenset(tuple(t) for t in x["allowed"]))


# -- modules ----------------------------------------------------------------------------


def _signature(m: EModule) -> dict:
    return {"atoms": list(m.vocabulary.atoms), "variables": list(m.specification.variables)}


def module_to_json(m: EModule) -> dict:
    if isinstance(m, PLModule):
        return {"logic": m.logic, "atoms": list(m.vocabulary.atoms), "formulas": [formula_to_json(f) for f in m.formulas]}
    if isinstance(m, LPModule):
        return {"logic": m.logic, "atoms": list(m.vocabulary.atoms), "rules": [rule_to_json(r) for r in m.rules]}
    if isinstance(m, ICSPModule):
        return {"logic": "icsp", "variables": list(m.specification.variables),
                "constraints": [constraint_to_json(c) for c in m.constraints]}
    if isinstance(m, SMTModule):
        return {"logic": m.logic, **_signature(m), "formulas": [formula_to_json(f) for f in m.formulas]}
    if isinstance(m, CASModule):
        return {"logic": "cas", **_signature(m), "rules": [rule_to_json(r) for r in m.rules]}
    if isinstance(m, UniversalModule):
        return {"logic": "universal", **_signature(m)}
    if isinstance(m, ComplementModule):
        return {"logic": "complement", "of": module_to_json(m.inner)}
    if isinstance(m, ExplicitModule):
        members = sorted((m.vocabulary.sorted_atoms(i), list(v)) for i, v in m.members)
        return {"logic": "explicit", **_signature(m), "members": [[i, v] for i, v in members]}
    raise DocumentError(f"cannot serialize module of type {type(m).__name__}")


class _Context:
    def __init__(self, vocab: Vocabulary, spec: Specification, denotation: dict, strict: bool):
        self.vocab, self.spec, self.denotation, self.strict = vocab, spec, denotation, strict

    def vocabulary(self, atoms) -> Vocabulary:
        unknown = [a for a in atoms if a not in self.vocab]
        if unknown:
            raise DocumentError(f"atoms {unknown} are not in the document vocabulary")
        if len(set(atoms)) != len(atoms):
            raise DocumentError(f"repeated atoms in {atoms}")
        return Vocabulary(tuple(atoms), frozenset(a for a in atoms if a in self.vocab.constraint_atoms))

    def specification(self, variables) -> Specification:
        unknown = [v for v in variables if v not in self.spec]
        if unknown:
            raise DocumentError(f"variables {unknown} are not in the document specification")
        return Specification(tuple(variables), tuple(self.spec.domain(v) for v in variables))


def module_from_json(x, ctx: _Context) -> EModule:
    if not isinstance(x, dict) or "logic" not in x:
        raise DocumentError(f"module must be an object with a 'logic' field: {x!r}")
    logic = x["logic"]
    where = f"{logic} module"
    if logic in ("pl", "sat"):
        _fields(x, where, ("logic", "atoms", "formulas"))
        return PLModule([formula_from_json(f) for f in x["formulas"]], ctx.vocabulary(x["atoms"]), clausal=logic == "sat")
    if logic in ("lp", "lp-input"):
        _fields(x, where, ("logic", "atoms", "rules"))
        return LPModule([rule_from_json(r) for r in x["rules"]], ctx.vocabulary(x["atoms"]), input=logic == "lp-input")
    if logic == "icsp":
        _fields(x, where, ("logic", "variables", "constraints"))
        return ICSPModule([constraint_from_json(c) for c in x["constraints"]], ctx.specification(x["variables"]))
    if logic in ("smt", "rsmt"):
        _fields(x, where, ("logic", "atoms", "variables", "formulas"))
        return SMTModule([formula_from_json(f) for f in x["formulas"]], ctx.vocabulary(x["atoms"]),
                         ctx.specification(x["variables"]), ctx.denotation, ctx.strict, restricted=logic == "rsmt")
    if logic == "cas":
        _fields(x, where, ("logic", "atoms", "variables", "rules"))
        return CASModule([rule_from_json(r) for r in x["rules"]], ctx.vocabulary(x["atoms"]),
                         ctx.specification(x["variables"]), ctx.denotation, ctx.strict)
    if logic == "universal":
        _fields(x, where, ("logic", "atoms", "variables"))
        return UniversalModule(ctx.vocabulary(x["atoms"]), ctx.specification(x["variables"]))
    if logic == "complement":
        _fields(x, where, ("logic", "of"))
        return ComplementModule(module_from_json(x["of"], ctx))
    if logic == "explicit":
        _fields(x, where, ("logic", "atoms", "variables", "members"))
        return ExplicitModule(ctx.vocabulary(x["atoms"]), ctx.specification(x["variables"]),
                              [(i, tuple(v)) for i, v in x["members"]])
    raise DocumentError(f"unknown logic {logic!r}")


# -- whole documents ----------------------------------------------------------------------


def _walk(m: EModule):
    yield m
    if isinstance(m, ComplementModule):
        yield from _walk(m.inner)


def _all_modules(system: EwSystem):
    for m in list(system.hard.modules) + [b.module for b in system.soft]:
        yield from _walk(m)


def to_json(doc: EwsDocument) -> dict:
    system = doc.system
    denotation: dict[str, Constraint] = {}
    strict_flags = set()
    for m in _all_modules(system):
        if isinstance(m, (SMTModule, CASModule)):
            strict_flags.add(m.strict)
            for a, c in m.denotation.items():
                if denotation.setdefault(a, c) != c:
                    raise DocumentError(f"constraint atom {a!r} carries two different constraints")
    if len(strict_flags) > 1:
        raise DocumentError("modules disagree on strict/nonstrict constraint atoms")
    strict = strict_flags.pop() if strict_flags else doc.strict
    vocab, spec = system.vocabulary, system.specification
    return {
        "version": VERSION,
        "vocabulary": [{"atom": a, "kind": vocab.kind(a)} for a in vocab.atoms],
        "specification": {v: list(spec.domain(v)) for v in spec.variables},
        "denotation": {a: constraint_to_json(denotation[a]) for a in vocab.atoms if a in denotation},
        "hard": [module_to_json(m) for m in system.hard.modules],
        "soft": [
            {
                "module": module_to_json(b.module),
                "weight": b.weight,
                "coefficients": {v: str(c) for v, c in b.coefficients.items()},
                "level": b.level,
            }
            for b in system.soft
        ],
        "flags": {"strict": strict, "sense": doc.sense, "extended": doc.extended},
    }


def dumps(doc: EwsDocument) -> str:
    return json.dumps(to_json(doc), indent=2, ensure_ascii=False) + "\n"


def from_json(data) -> EwsDocument:
    _fields(data, "document", ("version", "vocabulary", "specification", "denotation", "hard", "soft", "flags"))
    if data["version"] != VERSION:
        raise DocumentError(f"unsupported version {data['version']!r}; expected {VERSION!r}")
    flags = _fields(data["flags"], "flags", ("strict", "sense", "extended"))
    if flags["sense"] not in SENSES:
        raise DocumentError(f"flags.sense must be one of {SENSES}")
    regular, constraint = [], []
    order = []
    for entry in data["vocabulary"]:
        _fields(entry, "vocabulary entry", ("atom", "kind"))
        if entry["kind"] not in ("regular", "constraint"):
            raise DocumentError(f"unknown atom kind {entry['kind']!r}")
        order.append(entry["atom"])
        (constraint if entry["kind"] == "constraint" else regular).append(entry["atom"])
    try:
        vocab = Vocabulary(tuple(order), frozenset(constraint))
        spec = Specification.of(data["specification"])
    except (ValueError, TypeError) as exc:
        raise DocumentError(str(exc)) from None
    if not isinstance(data["denotation"], dict):
        raise DocumentError("denotation must be an object")
    denotation = {a: constraint_from_json(c) for a, c in data["denotation"].items()}
    extra = [a for a in denotation if a not in vocab.constraint_atoms]
    if extra:
        raise DocumentError(f"denotation given for non-constraint atoms {extra}")
    ctx = _Context(vocab, spec, denotation, bool(flags["strict"]))
    try:
        hard = [module_from_json(m, ctx) for m in data["hard"]]
        soft = []
        for s in data["soft"]:
            _fields(s, "soft condition", ("module", "weight", "coefficients", "level"))
            coeffs = {v: Fraction(q) for v, q in s["coefficients"].items()}
            soft.append(EwCondition(module_from_json(s["module"], ctx), s["weight"], coeffs, s["level"]))
        system = EwSystem(hard, soft)
    except DocumentError:
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise DocumentError(str(exc)) from exc
    return EwsDocument(system, flags["sense"], bool(flags["extended"]), bool(flags["strict"]))


def loads(text: str) -> EwsDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno}: invalid JSON: {exc.msg}") from None
    return from_json(data)
