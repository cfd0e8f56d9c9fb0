from __future__ import annotations

import random

import pytest

from ewopt.core import Specification, Vocabulary
from ewopt.ewsys import EwCondition, EwSystem, universal_module
from ewopt.transforms import PLUS_EXT
from ewopt.verify import (
    CHECK_NAMES,
    GUARDED,
    RandomSystemParams,
    _Ctx,
    check_complements,
    evaluation_independent,
    random_system,
    run_verify,
    sign_elimination_applies,
)
from ewopt.logics import PLModule
from ewopt.frontends.syntax import parse_formula


def test_same_seed_same_report():
    a = run_verify(RandomSystemParams(seed=7), trials=12)
    b = run_verify(RandomSystemParams(seed=7), trials=12)
    assert a.summary() == b.summary()
    assert a.ran == b.ran and a.failed == b.failed


def test_generator_respects_bounds():
    p = RandomSystemParams()
    for seed in range(40):
        w = random_system(random.Random(seed), p)
        assert len(w.vocabulary) <= p.max_atoms
        assert len(w.specification) <= p.max_vars
        assert all(len(d) <= p.max_domain for d in w.specification.domains)
        assert len(w.soft) <= p.max_soft
        assert (1 << len(w.vocabulary)) * w.specification.size() <= p.max_states


def test_zero_soft_branch():
    report = run_verify(RandomSystemParams(max_soft=0), trials=10)
    assert report.ran["empty-soft-all-optimal"] == 10
    assert report.passed


def test_guarded_mode_passes():
    report = run_verify(RandomSystemParams(sign_checks=GUARDED), trials=60)
    assert report.passed, report.summary()
    assert report.ran["sign-elim-plain"] > 0 and report.ran["sign-elim-extended"] > 0


def test_every_check_runs():
    report = run_verify(RandomSystemParams(seed=3, sign_checks=GUARDED), trials=5)
    assert set(report.ran) == set(CHECK_NAMES)
    assert all(report.ran[n] > 0 for n in CHECK_NAMES if not n.startswith("sign-"))


def test_stated_sign_checks_find_the_counterexample():
    report = run_verify(RandomSystemParams(), trials=4)
    first = report.first_failure("sign-elim-plain")
    assert first is not None and first.trial == 3
    assert "sign + plain max" in first.messages[0]


def test_minimal_counterexample_is_outside_the_guard():
    u = universal_module(Vocabulary(), Specification.of({"x": [0, 1]}))
    w = EwSystem([u], [EwCondition(u, -1, {"x": 1})])
    assert not sign_elimination_applies(w, PLUS_EXT, extended=True)
    assert evaluation_independent(PLModule([parse_formula("a")]))


def test_complement_partition_check_is_clean():
    w = random_system(random.Random(11), RandomSystemParams())
    assert check_complements(_Ctx(w), random.Random(0)) == []


@pytest.mark.parametrize("field,value", [("max_atoms", -1), ("sign_checks", "loose"), ("max_states", 0)])
def test_params_validation(field, value):
    with pytest.raises(ValueError):
        RandomSystemParams(**{field: value})
