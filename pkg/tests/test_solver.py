from __future__ import annotations

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import sample_text
from ewopt.core import Evaluation, Specification, StateCapExceeded, Vocabulary
from ewopt.ewsys import MAX, MIN, EwCondition, EwSystem, ExplicitModule, universal_module
from ewopt.frontends import load
from ewopt.frontends.syntax import parse_formula
from ewopt.logics import PLModule
from ewopt.solver import (
    dominates,
    dominates_extended,
    enumerate_extended_models,
    enumerate_models,
    optimal_extended_models,
    optimal_extended_models_by_domination,
    optimal_models,
    optimal_models_by_domination,
    solve,
    state_space_size,
)

NOT0 = "|x!=0|"


def system_of(name, fmt):
    return load(sample_text(name), fmt)[0]


def test_extended_models_of_examples():
    assert len(enumerate_extended_models(system_of("min_x.omt", "omt"))) == 3
    assert len(enumerate_extended_models(system_of("choice_guard.cc21", "cc21"))) == 4


def test_contradictory_hard_part():
    w = EwSystem([PLModule([parse_formula("a & not a")])])
    assert enumerate_extended_models(w) == [] and optimal_models(w) == []


def test_optimal_models_examples():
    assert optimal_models(system_of("soft_pair.gpw", "gpw"), MAX) == [frozenset()]
    assert set(optimal_models(system_of("maxsmt.gpw", "gpw"), MAX)) == {frozenset("b"), frozenset(["b", NOT0])}


def test_domination_agrees_on_examples():
    for name, fmt in [("soft_pair.gpw", "gpw"), ("maxsmt.gpw", "gpw")]:
        w = system_of(name, fmt)
        assert set(optimal_models_by_domination(w, MAX)) == set(optimal_models(w, MAX))
    for name, fmt in [("min_x.omt", "omt"), ("sum_bound.ilp", "ilp")]:
        w, f = load(sample_text(name), fmt)
        assert set(optimal_extended_models_by_domination(w, f.sense)) == set(optimal_extended_models(w, f.sense))


def test_empty_soft_everything_optimal():
    w = system_of("min_x.omt", "omt").with_soft([])
    assert set(optimal_extended_models(w)) == set(enumerate_extended_models(w))
    assert set(optimal_models(w, MIN)) == set(enumerate_models(w))


def test_single_model_is_optimal():
    w = EwSystem([PLModule([parse_formula("a")])], [EwCondition(PLModule([parse_formula("a")]), -3)])
    assert optimal_models_by_domination(w, MAX) == [frozenset("a")]


def test_ilp_optima():
    w = system_of("sum_bound.ilp", "ilp")
    opt = optimal_extended_models(w, MAX)
    assert sorted((e.evaluation["x"], e.evaluation["y"]) for e in opt) == [(0, 3), (1, 2), (2, 1), (3, 0)]


def test_dominates():
    w = system_of("choice_weak.lp", "op")
    assert dominates(frozenset("a"), frozenset("b"), w, MIN)
    assert not dominates(frozenset("a"), frozenset("a"), w, MIN)
    with pytest.raises(ValueError):
        dominates(frozenset(), frozenset("a"), w, MIN)
    flat = w.with_soft([])
    assert not dominates(frozenset("a"), frozenset("b"), flat, MIN)


def test_equal_cost_pair_does_not_dominate():
    w = system_of("sum_bound.ilp", "ilp")
    a = (frozenset(), Evaluation({"x": 0, "y": 3}))
    b = (frozenset(), Evaluation({"x": 3, "y": 0}))
    assert not dominates_extended(a, b, w, MAX) and not dominates_extended(b, a, w, MAX)
    c = (frozenset(), Evaluation({"x": 0, "y": 0}))
    assert dominates_extended(a, c, w, MAX)


def test_state_space_size():
    spec = Specification.of({"x": [0, 1, 2]})
    w = EwSystem([universal_module(Vocabulary.of("ab"), spec)])
    assert state_space_size(w) == 12
    assert state_space_size(EwSystem([])) == 1
    big = EwSystem([universal_module(Vocabulary.of([f"p{i}" for i in range(30)]))])
    with pytest.raises(StateCapExceeded):
        state_space_size(big)


def test_threads_do_not_change_results():
    w = system_of("square_bound.cc22", "cc22")
    assert enumerate_extended_models(w, threads=1) == enumerate_extended_models(w, threads=4)


def test_solve_result_stats():
    r = solve(system_of("soft_pair.gpw", "gpw"), MAX, all_costs=True)
    assert r.stats["models"] == 3 and r.stats["optimal"] == 1
    assert set(r.costs) == set(r.models)
    with pytest.raises(ValueError):
        solve(system_of("soft_pair.gpw", "gpw"), "best")


@st.composite
def small_systems(draw):
    vocab = Vocabulary.of(["a", "b"])
    spec = Specification.of({"x": [0, 1, 2]})
    points = [(frozenset(i), (x,)) for i in [(), ("a",), ("b",), ("a", "b")] for x in range(3)]
    hard = ExplicitModule(vocab, spec, draw(st.lists(st.sampled_from(points), unique=True)))
    soft = []
    for _ in range(draw(st.integers(0, 4))):
        module = ExplicitModule(vocab, spec, draw(st.lists(st.sampled_from(points), unique=True)))
        soft.append(EwCondition(module, draw(st.integers(-3, 3)),
                                {"x": Fraction(draw(st.integers(-2, 2)), draw(st.integers(1, 2)))},
                                draw(st.integers(1, 3))))
    return EwSystem([hard], soft)


def _lex_brute_force(items, cost, sense):
    """Independent oracle: compare full cost vectors lexicographically, greatest level first."""
    if not items:
        return set()
    keys = {i: cost(i) for i in items}
    best = (max if sense == MAX else min)(keys.values())
    return {i for i in items if keys[i] == best}


@settings(max_examples=60, deadline=None)
@given(small_systems(), st.sampled_from([MAX, MIN]))
def test_optimality_matches_lexicographic_oracle(w, sense):
    from ewopt.ewsys import CostVector

    ext = enumerate_extended_models(w)
    assert set(optimal_extended_models(w, sense)) == _lex_brute_force(
        ext, lambda e: CostVector.of_extended(e.interpretation, e.evaluation, w).values(), sense)
    models = enumerate_models(w)
    assert set(optimal_models(w, sense)) == _lex_brute_force(models, lambda i: CostVector.of_model(i, w).values(), sense)
    assert set(optimal_models_by_domination(w, sense)) == set(optimal_models(w, sense))
    assert set(optimal_extended_models_by_domination(w, sense)) == set(optimal_extended_models(w, sense))
    assert set(models) == {e.interpretation for e in ext}
    assert len(list(itertools.chain(ext))) == len(set(ext))
