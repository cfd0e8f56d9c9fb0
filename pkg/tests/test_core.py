from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ewopt.core import (
    Evaluation,
    Specification,
    StateCapExceeded,
    Vocabulary,
    check_cap,
    enumerate_evaluations,
    enumerate_interpretations,
    get_state_cap,
    project_evaluation,
    project_interpretation,
)


def test_vocabulary_kinds_and_order():
    v = Vocabulary.of(["a", "b"], ["|x>0|"])
    assert v.atoms == ("a", "b", "|x>0|")
    assert v.kind("|x>0|") == "constraint" and v.kind("a") == "regular"
    assert v.regular == {"a", "b"}


def test_vocabulary_rejects_duplicates_and_kind_clash():
    with pytest.raises(ValueError):
        Vocabulary(("a", "a"))
    with pytest.raises(ValueError):
        Vocabulary.of(["c"]).union(Vocabulary.of([], ["c"]))


def test_interpretations_in_counter_order():
    v = Vocabulary.of(["a", "b"])
    assert list(enumerate_interpretations(v)) == [frozenset(), {"a"}, {"b"}, {"a", "b"}]


def test_evaluations_first_variable_slowest():
    spec = Specification.of({"x": [0, 1], "y": [5, 6]})
    values = [tuple(nu.values()) for nu in enumerate_evaluations(spec)]
    assert values == [(0, 5), (0, 6), (1, 5), (1, 6)]


def test_empty_signature_has_one_state_each():
    assert list(enumerate_interpretations(Vocabulary())) == [frozenset()]
    assert list(enumerate_evaluations(Specification())) == [Evaluation()]


def test_projection_of_evaluation():
    nu = Evaluation({"x": 1, "y": 1, "z": 2})
    assert project_evaluation(nu, ["x", "y"]) == {"x": 1, "y": 1}
    with pytest.raises(KeyError):
        project_evaluation(nu, ["w"])


def test_projection_of_interpretation():
    big = Vocabulary.of(["a", "b", "c"])
    assert project_interpretation({"a", "c"}, Vocabulary.of(["a", "b"]), big) == {"a"}
    with pytest.raises(ValueError):
        project_interpretation({"a"}, Vocabulary.of(["d"]), big)


def test_specification_domains_and_errors():
    spec = Specification.ranges(x=(-1, 1))
    assert spec.domain("x") == (-1, 0, 1)
    assert spec.size() == 3
    with pytest.raises(ValueError):
        Specification(("x",), ((),))
    with pytest.raises(ValueError):
        spec.union(Specification.ranges(x=(0, 1)))


def test_state_cap():
    assert get_state_cap() == 50_000_000
    with pytest.raises(StateCapExceeded):
        check_cap(2**30)
    with pytest.raises(StateCapExceeded):
        list(enumerate_interpretations(Vocabulary.of("abc"), cap=7))


def test_evaluation_equality_ignores_order():
    assert Evaluation([("x", 1), ("y", 2)]) == Evaluation([("y", 2), ("x", 1)])
    assert hash(Evaluation([("x", 1), ("y", 2)])) == hash(Evaluation([("y", 2), ("x", 1)]))


@given(st.dictionaries(st.sampled_from("uvwxyz"), st.sets(st.integers(-3, 3), min_size=1, max_size=3), max_size=4))
def test_evaluation_count_is_product_of_domains(domains):
    spec = Specification.of(domains)
    evals = list(enumerate_evaluations(spec))
    assert len(evals) == spec.size()
    assert len(set(evals)) == len(evals)
    assert all(spec.valid(nu) for nu in evals)
    assert [spec.order_key(nu) for nu in evals] == sorted(spec.order_key(nu) for nu in evals)
