from __future__ import annotations

import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ewopt.core import Specification, Vocabulary, enumerate_evaluations, enumerate_interpretations
from ewopt.logics import (
    CASModule,
    Extensional,
    ICSPModule,
    Linear,
    LPModule,
    PLModule,
    Rule,
    SMTModule,
    clause,
    complement_constraint,
    conjunction,
    csp_side_condition,
    eval_prop_formula,
    is_answer_set,
    is_cas_extended_answer_set,
    is_icsp_solution,
    is_input_answer_set,
    is_smt_extended_model,
    least_model_positive,
    reduct,
    satisfies_constraint,
)
from ewopt.frontends.syntax import parse_formula

NOT0 = "|x!=0|"
X012 = Specification.of({"x": [0, 1, 2]})
CHOICE = [Rule("a", (), ("b",)), Rule("b", (), ("a",))]
C1 = Linear(((1, "x"),), ">=", 1)
GAMMA = {NOT0: C1}
SIGMA = Vocabulary.of(["a", "b"], [NOT0])
GUARDED_CHOICE = CHOICE + [Rule(None, ("a", NOT0))]
CLAUSES = [parse_formula("a | b"), parse_formula("not a"), parse_formula(f"not a | not {NOT0}")]


def nu(x):
    return {"x": x}


class TestConstraints:
    def test_linear(self):
        assert satisfies_constraint(nu(1), C1)
        assert not satisfies_constraint(nu(0), C1)

    def test_empty_relation(self):
        assert not satisfies_constraint(nu(3), Extensional(("x",), frozenset()))

    def test_missing_variable(self):
        with pytest.raises(KeyError):
            satisfies_constraint({}, C1)

    def test_extensional_complement(self):
        c = Extensional(("x",), frozenset({(1,), (2,)}))
        assert complement_constraint(c, X012) == Extensional(("x",), frozenset({(0,)}))

    def test_linear_complement(self):
        assert complement_constraint(C1) == Linear(((1, "x"),), "<", 1)
        assert complement_constraint(Linear(((1, "x"),), "=", 1)).relation == "!="

    def test_empty_table_complement_is_full(self):
        spec = Specification.of({"x": [0, 1], "y": [0, 1]})
        full = complement_constraint(Extensional(("x", "y"), frozenset()), spec)
        assert full.allowed == frozenset(itertools.product([0, 1], repeat=2))

    @given(st.lists(st.tuples(st.integers(-3, 3), st.sampled_from("xy")), max_size=3, unique_by=lambda t: t[1]),
           st.sampled_from(["<", ">", "<=", ">=", "=", "!="]), st.integers(-6, 6))
    def test_complement_partition_linear(self, terms, rel, rhs):
        c = Linear(tuple(terms), rel, rhs)
        spec = Specification.ranges(x=(-2, 2), y=(-2, 2))
        comp = complement_constraint(c, spec)
        for v in enumerate_evaluations(spec):
            assert satisfies_constraint(v, c) != satisfies_constraint(v, comp)

    @given(st.sets(st.tuples(st.integers(0, 2), st.integers(0, 1))))
    def test_complement_partition_table(self, allowed):
        spec = Specification.of({"x": [0, 1, 2], "y": [0, 1]})
        c = Extensional(("x", "y"), frozenset(allowed))
        comp = complement_constraint(c, spec)
        for v in enumerate_evaluations(spec):
            assert satisfies_constraint(v, c) != satisfies_constraint(v, comp)


class TestPrograms:
    def test_reduct(self):
        assert reduct(CHOICE, {"a"}) == [Rule("a")]
        assert reduct(CHOICE, {"a", "b"}) == []
        positive = [Rule("a"), Rule("b", ("a",))]
        assert reduct(positive, {"a"}) == positive

    def test_least_model(self):
        assert least_model_positive([Rule("a")]) == {"a"}
        assert least_model_positive([Rule("a", ("b",))]) == frozenset()
        assert least_model_positive([Rule("a"), Rule("b", ("a",))]) == {"a", "b"}

    def test_answer_sets(self):
        assert is_answer_set(CHOICE, {"a"})
        assert not is_answer_set(CHOICE, {"a", "b"})
        assert not is_answer_set(CHOICE, set())

    def test_constraint_rule_rejects(self):
        assert not is_answer_set(CHOICE + [Rule(None, ("a",))], {"a"})
        assert is_answer_set(CHOICE + [Rule(None, ("a",))], {"b"})

    def test_input_answer_sets(self):
        sigma = Vocabulary.of("abc")
        assert is_input_answer_set(CHOICE, sigma, {"a", "c"})
        assert is_input_answer_set(CHOICE, sigma, {"b"})
        assert not is_input_answer_set(CHOICE, sigma, {"c"})
        found = {x for x in enumerate_interpretations(sigma) if is_input_answer_set(CHOICE, sigma, x)}
        assert len(found) == 4

    def test_input_agrees_with_plain_over_own_atoms(self):
        sigma = Vocabulary.of("ab")
        for x in enumerate_interpretations(sigma):
            assert is_input_answer_set(CHOICE, sigma, x) == is_answer_set(CHOICE, x)

    @given(st.lists(st.tuples(st.sampled_from("abc"), st.sets(st.sampled_from("abc"), max_size=2),
                              st.sets(st.sampled_from("abc"), max_size=2)), max_size=5))
    def test_answer_sets_are_minimal_models(self, raw):
        program = [Rule(h, tuple(sorted(p)), tuple(sorted(n))) for h, p, n in raw]
        for x in enumerate_interpretations(Vocabulary.of("abc")):
            if not is_answer_set(program, x):
                continue
            assert all(r.satisfied(x) for r in program)
            red = reduct(program, x)
            for k in range(len(x)):
                for sub in itertools.combinations(sorted(x), k):
                    assert not all(r.satisfied(frozenset(sub)) for r in red)


class TestSideConditions:
    def test_member(self):
        assert csp_side_condition([NOT0], {NOT0}, GAMMA) == [C1]

    def test_strict_complement(self):
        (c,) = csp_side_condition([NOT0], set(), GAMMA)
        assert [x for x in range(3) if c.satisfied(nu(x))] == [0]

    def test_nonstrict(self):
        assert csp_side_condition([NOT0], set(), GAMMA, strict=False) == []

    def test_missing_denotation(self):
        with pytest.raises(KeyError):
            csp_side_condition(["|y>0|"], set(), GAMMA)


class TestCasAndSmt:
    def test_cas_members(self):
        assert is_cas_extended_answer_set(GUARDED_CHOICE, GAMMA, {"a"}, nu(0), SIGMA, X012)
        assert is_cas_extended_answer_set(GUARDED_CHOICE, GAMMA, {"b", NOT0}, nu(1), SIGMA, X012)
        assert not is_cas_extended_answer_set(GUARDED_CHOICE, GAMMA, {"a", NOT0}, nu(1), SIGMA, X012)

    def test_cas_brute_force(self):
        found = {(frozenset(x), v["x"]) for x in enumerate_interpretations(SIGMA) for v in enumerate_evaluations(X012)
                 if is_cas_extended_answer_set(GUARDED_CHOICE, GAMMA, x, v, SIGMA, X012)}
        assert found == {(frozenset("a"), 0), (frozenset("b"), 0), (frozenset(["b", NOT0]), 1),
                         (frozenset(["b", NOT0]), 2)}

    def test_smt_members(self):
        assert is_smt_extended_model(CLAUSES, GAMMA, {"b"}, nu(0), SIGMA, X012)
        assert is_smt_extended_model(CLAUSES, GAMMA, {"b", NOT0}, nu(2), SIGMA, X012)
        assert not is_smt_extended_model(CLAUSES, GAMMA, {"a"}, nu(0), SIGMA, X012)

    def test_modules_agree_with_functions(self):
        cas = CASModule(GUARDED_CHOICE, SIGMA, X012, GAMMA)
        smt = SMTModule(CLAUSES, SIGMA, X012, GAMMA)
        for x in enumerate_interpretations(SIGMA):
            for v in enumerate_evaluations(X012):
                assert cas.contains(x, v) == is_cas_extended_answer_set(GUARDED_CHOICE, GAMMA, x, v, SIGMA, X012)
                assert smt.contains(x, v) == is_smt_extended_model(CLAUSES, GAMMA, x, v, SIGMA, X012)

    def test_projection_invariance(self):
        smt = SMTModule(CLAUSES, SIGMA, X012, GAMMA)
        assert smt.contains({"b", "zzz"}, {"x": 0, "y": 7})
        assert smt.has_model({"b"}) and not smt.has_model({"a"})

    def test_restricted_smt_requires_conjunctions(self):
        with pytest.raises(ValueError):
            SMTModule([parse_formula("a | b")], SIGMA, X012, GAMMA, restricted=True)
        SMTModule([conjunction(["a"], [NOT0])], SIGMA, X012, GAMMA, restricted=True)

    def test_cas_heads_must_be_regular(self):
        with pytest.raises(ValueError):
            CASModule([Rule(NOT0)], SIGMA, X012, GAMMA)

    def test_missing_denotation_rejected(self):
        with pytest.raises(ValueError):
            SMTModule(CLAUSES, SIGMA, X012, {})


class TestIcspAndFormulas:
    def test_icsp(self):
        c = Linear(((1, "x"), (1, "y")), "<=", 3)
        assert is_icsp_solution([c], {"x": 1, "y": 2})
        assert not is_icsp_solution([c], {"x": 2, "y": 2})
        assert is_icsp_solution([], {"x": 9})
        assert not is_icsp_solution([], {}, {"a"})

    def test_icsp_module_rejects_bad_table(self):
        with pytest.raises(ValueError):
            ICSPModule([Extensional(("x",), frozenset({(7,)}))], X012)

    def test_eval(self):
        assert eval_prop_formula(parse_formula("a | b"), {"b"})
        assert not eval_prop_formula(parse_formula("not a"), {"a"})
        assert eval_prop_formula(parse_formula("a2 -> a1"), set())

    def test_sat_logic_requires_clauses(self):
        PLModule([clause("a", "-b")], clausal=True)
        with pytest.raises(ValueError):
            PLModule([parse_formula("a & b")], clausal=True)

    def test_lp_module(self):
        m = LPModule(CHOICE)
        assert [x for x in enumerate_interpretations(m.vocabulary) if m.contains(x)] == [{"a"}, {"b"}]
        inp = LPModule(CHOICE, Vocabulary.of("abc"), input=True)
        assert sum(inp.contains(x) for x in enumerate_interpretations(inp.vocabulary)) == 4
