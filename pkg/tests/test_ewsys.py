from __future__ import annotations

from fractions import Fraction

import pytest

from conftest import sample_text
from ewopt.core import Evaluation, Specification, Vocabulary, enumerate_evaluations, enumerate_interpretations
from ewopt.ewsys import (
    ComplementModule,
    CostVector,
    Eams,
    EwCondition,
    EwSystem,
    ExplicitModule,
    IncoherentSystemError,
    check_coherence,
    cost_extended,
    cost_model,
    holds_eams,
    level_cost,
    level_cost_extended,
    levels,
    succ_level,
    universal_module,
)
from ewopt.frontends import load
from ewopt.frontends.syntax import parse_formula
from ewopt.logics import PLModule, clause

X01 = Specification.of({"x": [0, 1]})
A1A2 = Vocabulary.of(["a1", "a2"])


def nu_z():
    hard = PLModule([parse_formula("a2 -> a1")], A1A2)
    soft = [EwCondition(PLModule([parse_formula("a2")]), 3), EwCondition(PLModule([parse_formula("not a1")]), 5)]
    return EwSystem([hard], soft)


def test_universal_module():
    u = universal_module(Vocabulary.of("a"), X01)
    members = list(u.extended_members())
    assert len(members) == 4
    assert u.contains({"a", "other"}, {"x": 1, "y": 9})


def test_eams_conjunction():
    system, _ = load(sample_text("min_x.omt"), "omt")
    assert holds_eams(system.hard, {"b"}, {"x": 0})
    assert holds_eams([], {"anything"})
    assert not any(holds_eams([PLModule([parse_formula("a")]), PLModule([parse_formula("not a")])], x)
                   for x in enumerate_interpretations(Vocabulary.of("a")))


def test_eams_domain_clash_is_reported():
    u1 = universal_module(Vocabulary(), X01)
    u2 = universal_module(Vocabulary(), Specification.of({"x": [0, 1, 2]}))
    with pytest.raises(IncoherentSystemError):
        holds_eams(Eams([u1, u2]), set())


def test_coherence_violations():
    hard = PLModule([parse_formula("a")])
    with pytest.raises(IncoherentSystemError) as err:
        EwSystem([hard], [EwCondition(PLModule([parse_formula("b")]), 1)])
    assert "'b'" in str(err.value)
    loose = EwSystem([universal_module(Vocabulary(), X01)],
                     [EwCondition(universal_module(Vocabulary(), Specification.of({"x": [0, 1, 2]})), 1)], check=False)
    assert any("domain" in p for p in check_coherence(loose))
    assert check_coherence(nu_z()) == []


def test_condition_validation():
    with pytest.raises(ValueError):
        EwCondition(PLModule([]), 1, level=0)
    with pytest.raises(ValueError):
        EwCondition(PLModule([]), 1, {"x": 1})


def test_cost_model_table():
    w = nu_z()
    neg_a1, a2 = w.soft[1], w.soft[0]
    assert cost_model(frozenset(), neg_a1) == 5
    assert cost_model(frozenset(), a2) == 0
    assert cost_model(frozenset(), EwCondition(PLModule([]), 0)) == 0
    assert level_cost(frozenset(["a1", "a2"]), w, 1) == 3
    assert level_cost(frozenset(["a1"]), w, 1) == 0
    with pytest.raises(KeyError):
        level_cost(frozenset(), w, 2)


def test_cost_model_is_existential_over_evaluations():
    # the module is a model of {} because x = 0 works, even if x = 1 does not
    m = ExplicitModule(Vocabulary(), X01, [((), (0,))])
    assert cost_model(frozenset(), EwCondition(m, 7)) == 7
    assert cost_model(frozenset(), EwCondition(ExplicitModule(Vocabulary(), X01, []), 7)) == 0


def test_cost_extended():
    spec = Specification.of({"x": [0, 1, 2]})
    b = EwCondition(universal_module(Vocabulary(), spec), 0, {"x": 1})
    assert cost_extended(frozenset(), {"x": 2}, b) == 2
    empty = EwCondition(ExplicitModule(Vocabulary(), spec, []), 0, {"x": 1})
    assert cost_extended(frozenset(), {"x": 2}, empty) == 0
    assert cost_extended(frozenset(), {"x": 2}, b.replace(coefficients={})) == 0


def test_omt_level_cost():
    system, _ = load(sample_text("min_x.omt"), "omt")
    assert level_cost_extended(frozenset("b"), Evaluation({"x": 0}), system, 1) == 0


def test_levels_and_successors():
    m = universal_module()
    w = EwSystem([], [EwCondition(m, 1, level=l) for l in (8, 2, 9, 6)])
    assert levels(w) == [2, 6, 8, 9]
    assert [succ_level(w, l) for l in (2, 6, 8, 9)] == [6, 8, 9, None]
    assert succ_level(EwSystem([], [EwCondition(m, 1)]), 1) is None
    with pytest.raises(KeyError):
        succ_level(w, 3)


def test_zero_on_non_models_exhaustive():
    system, _ = load(sample_text("maxsmt.gpw"), "gpw")
    for x in enumerate_interpretations(system.vocabulary):
        for v in enumerate_evaluations(system.specification):
            for b in system.soft:
                if not b.module.contains(x, v):
                    assert cost_extended(x, v, b) == 0
                if not b.module.has_model(x):
                    assert cost_model(x, b) == 0


def test_plain_cost_ignores_coefficients():
    spec = Specification.of({"x": [0, 1, 2]})
    b = EwCondition(universal_module(Vocabulary(), spec), 4, {"x": Fraction(1, 3)})
    assert cost_model(frozenset(), b) == cost_model(frozenset(), b.replace(coefficients={})) == 4


def test_complement_and_explicit_modules():
    a = PLModule([parse_formula("a")])
    comp = ComplementModule(a)
    assert comp.contains(set()) and not comp.contains({"a"})
    tab = ExplicitModule.tabulate(PLModule([clause("a", "b")]))
    assert len(tab.members) == 3


def test_cost_vector_order():
    cv = CostVector(((1, 2), (3, 5)))
    assert cv.values() == (5, 2)
    assert str(cv) == "@3: 5, @1: 2"
