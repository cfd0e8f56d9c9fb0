"""Extended weight systems: hard modular systems plus weighted soft conditions."""

from __future__ import annotations

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .core import EMPTY_EVALUATION, Specification, Vocabulary
from .logics import EModule

MAX = "max"
MIN = "min"
SENSES = (MAX, MIN)


class IncoherentSystemError(ValueError):
    def __init__(self, violations: list[str]):
        super().__init__("incoherent system: " + "; ".join(violations))
        self.violations = violations


class UniversalModule(EModule):
    """Theory whose semantics is every extended interpretation of its signature."""

    logic = "universal"

    def _sem(self, interp, nu):
        return True

    def has_model(self, interp):
        return True

    def describe(self):
        return f"T[{','.join(self.vocabulary.atoms)};{','.join(self._vars)}]"


def universal_module(vocabulary: Vocabulary = Vocabulary(), specification: Specification = Specification()) -> UniversalModule:
    return UniversalModule(vocabulary, specification)


class ComplementModule(EModule):
    """Pointwise negation of another module's semantics over the same signature."""

    logic = "complement"

    def __init__(self, inner: EModule):
        self.inner = inner
        super().__init__(inner.vocabulary, inner.specification)

    def _sem(self, interp, nu):
        return not self.inner.contains(interp, nu)

    def describe(self):
        return f"complement({self.inner.describe()})"


class ExplicitModule(EModule):
    """Semantics given as an explicit set of extended interpretations.

    Members are ``(atoms, values)`` pairs with ``values`` ordered like the
    specification's variables.
    """

    logic = "explicit"

    def __init__(self, vocabulary: Vocabulary, specification: Specification, members: Iterable[tuple[Iterable[str], Iterable[int]]]):
        super().__init__(vocabulary, specification)
        self.members = frozenset((frozenset(i), tuple(v)) for i, v in members)
        for i, v in self.members:
            if not i <= self._atoms or len(v) != len(self._vars):
                raise ValueError(f"member {sorted(i)}, {v} does not fit the signature")

    @classmethod
    def tabulate(cls, module: EModule) -> ExplicitModule:
        """An equivalent module listing the semantics of ``module`` point by point."""
        members = [(i, tuple(nu[v] for v in module.specification.variables)) for i, nu in module.extended_members()]
        return cls(module.vocabulary, module.specification, members)

    def _sem(self, interp, nu):
        return (interp, tuple(nu[v] for v in self._vars)) in self.members

    def describe(self):
        return f"explicit[{len(self.members)}]"


class Eams:
    """A coherent set of e-modules read as a conjunction."""

    def __init__(self, modules: Iterable[EModule] = ()):
        self.modules = tuple(modules)
        vocab, spec = Vocabulary(), Specification()
        self._clashes = []
        for m in self.modules:
            try:
                vocab = vocab.union(m.vocabulary)
            except ValueError as exc:
                self._clashes.append(str(exc))
            try:
                spec = spec.union(m.specification)
            except ValueError as exc:
                self._clashes.append(str(exc))
        self.vocabulary = vocab
        self.specification = spec

    def __iter__(self):
        return iter(self.modules)

    def __len__(self):
        return len(self.modules)

    def holds(self, interp, nu=EMPTY_EVALUATION) -> bool:
        return all(m.contains(interp, nu) for m in self.modules)


def holds_eams(hard: Eams | Iterable[EModule], interp, nu=EMPTY_EVALUATION) -> bool:
    if not isinstance(hard, Eams):
        hard = Eams(hard)
    if hard._clashes:
        raise IncoherentSystemError(hard._clashes)
    return hard.holds(interp, nu)


@dataclass(frozen=True, eq=False)
class EwCondition:
    """Soft condition ``(module, weight; coefficients @ level)``.

    Coefficients are exact rationals keyed by the module's variables; a
    variable without an entry has coefficient 0.
    """

    module: EModule
    weight: int = 0
    coefficients: Mapping[str, Fraction] = field(default_factory=dict)
    level: int = 1

    def __post_init__(self):
        coeffs = {str(k): Fraction(v) for k, v in dict(self.coefficients).items()}
        unknown = [v for v in coeffs if v not in self.module.specification]
        if unknown:
            raise ValueError(f"coefficients for variables {unknown} outside the module")
        if int(self.weight) != self.weight:
            raise ValueError("weights are integers")
        if int(self.level) != self.level or self.level < 1:
            raise ValueError(f"level must be a positive integer, got {self.level}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "weight", int(self.weight))
        object.__setattr__(self, "level", int(self.level))

    @property
    def plain(self) -> bool:
        """No nonzero coefficient, i.e. the abbreviated form ``(T, w@l)``."""
        return not any(self.coefficients.values())

    def replace(self, **changes) -> EwCondition:
        fields = dict(module=self.module, weight=self.weight, coefficients=self.coefficients, level=self.level)
        fields.update(changes)
        return EwCondition(**fields)

    def __repr__(self):
        coeffs = ",".join(f"{k}:{v}" for k, v in self.coefficients.items() if v)
        c = f"; {coeffs}" if coeffs else ""
        return f"({self.module.describe()}, {self.weight}{c} @ {self.level})"


class EwSystem:
    """Pair of a hard EAMS and a tuple of soft ew-conditions."""

    def __init__(self, hard: Eams | Iterable[EModule], soft: Iterable[EwCondition] = (), check: bool = True):
        self.hard = hard if isinstance(hard, Eams) else Eams(hard)
        self.soft = tuple(soft)
        if check:
            violations = check_coherence(self)
            if violations:
                raise IncoherentSystemError(violations)

    @property
    def vocabulary(self) -> Vocabulary:
        return self.hard.vocabulary

    @property
    def specification(self) -> Specification:
        return self.hard.specification

    def with_soft(self, soft: Iterable[EwCondition]) -> EwSystem:
        return EwSystem(self.hard, soft)

    def at_level(self, level: int) -> list[EwCondition]:
        return [b for b in self.soft if b.level == level]

    def __repr__(self):
        return f"EwSystem(hard={list(self.hard.modules)}, soft={list(self.soft)})"


def check_coherence(system: EwSystem) -> list[str]:
    """Every coherence violation of ``system``; an empty list means coherent."""
    hard = system.hard
    problems = list(hard._clashes)
    spec = hard.specification
    for i, b in enumerate(system.soft):
        m = b.module
        tag = f"soft condition {i} {b!r}"
        outside = [a for a in m.vocabulary.atoms if a not in hard.vocabulary]
        if outside:
            problems.append(f"{tag}: atoms {outside} are not in the hard vocabulary")
        for a in m.vocabulary.atoms:
            if a in hard.vocabulary and m.vocabulary.kind(a) != hard.vocabulary.kind(a):
                problems.append(f"{tag}: atom {a!r} has a different kind in the hard vocabulary")
        missing = [v for v in m.specification.variables if v not in spec]
        if missing:
            problems.append(f"{tag}: variables {missing} are not hard variables")
        for h in hard.modules:
            for v in m.specification.variables:
                if v in h.specification and h.specification.domain(v) != m.specification.domain(v):
                    problems.append(f"{tag}: variable {v!r} has domain {list(m.specification.domain(v))} "
                                    f"but {list(h.specification.domain(v))} in a hard module")
    return problems


def cost_model(interp, b: EwCondition) -> int:
    """Weight of ``b`` when ``interp`` is a model of it, else 0."""
    return b.weight if b.weight and b.module.has_model(interp) else 0


def cost_extended(interp, nu, b: EwCondition) -> Fraction:
    """Coefficient-weighted sum of ``nu`` when ``(interp, nu)`` is an extended model of ``b``."""
    if not any(b.coefficients.values()) or not b.module.contains(interp, nu):
        return Fraction(0)
    return sum((nu[x] * c for x, c in b.coefficients.items()), Fraction(0))


def levels(system: EwSystem) -> list[int]:
    return sorted({b.level for b in system.soft})


def succ_level(system: EwSystem, level: int) -> int | None:
    """Least level of ``system`` above ``level``; ``None`` for the greatest one."""
    ls = levels(system)
    if level not in ls:
        raise KeyError(f"level {level} does not occur in the system")
    above = [l for l in ls if l > level]
    return above[0] if above else None


def _check_level(system: EwSystem, level: int) -> list[EwCondition]:
    conds = system.at_level(level)
    if not conds:
        raise KeyError(f"level {level} does not occur in the system")
    return conds


def level_cost(interp, system: EwSystem, level: int) -> int:
    return sum(cost_model(interp, b) for b in _check_level(system, level))


def level_cost_extended(interp, nu, system: EwSystem, level: int) -> Fraction:
    return sum(
        (cost_model(interp, b) + cost_extended(interp, nu, b) for b in _check_level(system, level)),
        Fraction(0),
    )


@dataclass(frozen=True)
class CostVector:
    """Per-level totals, greatest level first."""

    costs: tuple[tuple[int, Fraction], ...]
    sense: str = MAX

    def __post_init__(self):
        costs = tuple(sorted(((int(l), Fraction(c)) for l, c in self.costs), reverse=True))
        object.__setattr__(self, "costs", costs)

    @classmethod
    def of_model(cls, interp, system: EwSystem, sense: str = MAX) -> CostVector:
        return cls(tuple((l, Fraction(level_cost(interp, system, l))) for l in levels(system)), sense)

    @classmethod
    def of_extended(cls, interp, nu, system: EwSystem, sense: str = MAX) -> CostVector:
        return cls(tuple((l, level_cost_extended(interp, nu, system, l)) for l in levels(system)), sense)

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.costs)

    def values(self) -> tuple[Fraction, ...]:
        return tuple(c for _, c in self.costs)

    def __str__(self):
        return ", ".join(f"@{l}: {c}" for l, c in self.costs)
