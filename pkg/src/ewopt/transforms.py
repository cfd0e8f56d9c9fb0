"""Rewrites of ew-systems that preserve (some notion of) optimal models."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

from .ewsys import ComplementModule, EwCondition, EwSystem, check_coherence, levels
from .logics import EModule

PLUS, MINUS, PLUS_EXT, MINUS_EXT = "+", "-", "++", "--"
SIGN_VARIANTS = (PLUS, MINUS, PLUS_EXT, MINUS_EXT)


@dataclass
class TransformReport:
    name: str
    source: EwSystem
    result: EwSystem
    rewrites: list[str] = field(default_factory=list)

    def __post_init__(self):
        problems = check_coherence(self.result)
        if problems:
            raise AssertionError(f"{self.name} produced an incoherent system: {problems}")


def _negated(coefficients):
    return {x: -c for x, c in coefficients.items()}


def normalize_levels(system: EwSystem) -> EwSystem:
    """Renumber levels 1..n keeping their order."""
    rank = {l: i for i, l in enumerate(levels(system), start=1)}
    return system.with_soft(b.replace(level=rank[b.level]) for b in system.soft)


def star(system: EwSystem) -> EwSystem:
    """Negate every weight; swaps optimal and min-optimal models."""
    return system.with_soft(b.replace(weight=-b.weight) for b in system.soft)


def star_star(system: EwSystem) -> EwSystem:
    """Negate weights and coefficients; swaps optimal and min-optimal extended models."""
    return system.with_soft(b.replace(weight=-b.weight, coefficients=_negated(b.coefficients)) for b in system.soft)


def complement_module(module: EModule) -> EModule:
    """Module over the same signature holding exactly where ``module`` does not.

    Complementing a complement gives back the original module object.
    """
    if isinstance(module, ComplementModule):
        return module.inner
    return ComplementModule(module)


def _flip_sign(b: EwCondition, variant: str) -> EwCondition:
    keep = b.weight >= 0 if variant in (PLUS, PLUS_EXT) else b.weight <= 0
    if keep:
        return b
    coeffs = _negated(b.coefficients) if variant in (PLUS_EXT, MINUS_EXT) else b.coefficients
    return b.replace(module=complement_module(b.module), weight=-b.weight, coefficients=coeffs)


def eliminate_weights_by_sign(system: EwSystem, variant: str = PLUS, extended: bool = False) -> EwSystem:
    """Move negative (``+``/``++``) or positive (``-``/``--``) weights onto complement modules.

    ``+`` and ``-`` keep coefficients and only preserve plain optima; pass
    ``extended=True`` when extended optima matter to get a warning for them.
    """
    if variant not in SIGN_VARIANTS:
        raise ValueError(f"variant must be one of {SIGN_VARIANTS}")
    if extended and variant in (PLUS, MINUS):
        warnings.warn(
            f"sign elimination {variant!r} does not preserve optimal extended models; use {variant * 2!r}",
            stacklevel=2,
        )
    return system.with_soft(_flip_sign(b, variant) for b in system.soft)


def drop_zero_weight(system: EwSystem) -> EwSystem:
    """Remove every condition of weight 0 (plain optima are unaffected)."""
    return system.with_soft(b for b in system.soft if b.weight != 0)


def drop_inert(system: EwSystem) -> EwSystem:
    """Remove conditions of the form ``(T, 0@l)``: zero weight and zero coefficients."""
    return system.with_soft(b for b in system.soft if b.weight != 0 or not b.plain)


def zero_coefficients(system: EwSystem) -> EwSystem:
    """Replace each ``(T, w; c@l)`` by ``(T, w@l)``."""
    return system.with_soft(b.replace(coefficients={}) for b in system.soft)


def remove_conditions(system: EwSystem, conditions) -> EwSystem:
    drop = {id(b) for b in conditions}
    return system.with_soft(b for b in system.soft if id(b) not in drop)


def replace_modules(system: EwSystem, replace) -> EwSystem:
    """Apply ``replace`` to every hard and soft module (e.g. to swap in equivalent theories)."""
    return EwSystem(
        [replace(m) for m in system.hard.modules],
        [b.replace(module=replace(b.module)) for b in system.soft],
    )


TRANSFORMS = {
    "normalize-levels": normalize_levels,
    "star": star,
    "star-star": star_star,
    "elim-neg": lambda w: eliminate_weights_by_sign(w, PLUS),
    "elim-pos": lambda w: eliminate_weights_by_sign(w, MINUS),
    "elim-neg-ext": lambda w: eliminate_weights_by_sign(w, PLUS_EXT),
    "elim-pos-ext": lambda w: eliminate_weights_by_sign(w, MINUS_EXT),
    "drop-zero": drop_zero_weight,
    "drop-inert": drop_inert,
    "zero-coeffs": zero_coefficients,
}

EXTENDED_UNSAFE = {"elim-neg", "elim-pos", "drop-zero", "zero-coeffs"}


def apply(name: str, system: EwSystem) -> TransformReport:
    """Run a named transform and record what happened to each condition."""
    try:
        fn = TRANSFORMS[name]
    except KeyError:
        raise ValueError(f"unknown transform {name!r}; choose from {sorted(TRANSFORMS)}") from None
    result = fn(system)
    rewrites = []
    if len(result.soft) == len(system.soft):
        for old, new in zip(system.soft, result.soft):
            if repr(old) != repr(new):
                rewrites.append(f"{old!r} -> {new!r}")
    else:
        kept = {id(b) for b in result.soft}
        rewrites = [f"dropped {b!r}" for b in system.soft if id(b) not in kept]
    return TransformReport(name, system, result, rewrites)
