import pytest
from hypothesis import given, strategies as st

from conftest import SMALL, fixture_profile, instances
from dbagg import NULL, Instance, Schema
from dbagg.folang import (And, Atom, Const, Eq, Exists, Forall, FormulaSyntaxError, Not, Or,
                          Query, Var, answer, answer_by_enumeration, classify, depth, desugar,
                          free_vars, in_fragment, is_true, normal_form, parse_formula,
                          parse_query, resugar, satisfies, to_text)
from dbagg.oracle import enum_formulas, enum_queries

P2 = Schema({"P": 2})


class TestParser:
    def test_precedence(self):
        phi = parse_formula("P(x) and Q(x,y) or not P(y)", SMALL)
        assert isinstance(phi, Or)
        assert isinstance(phi.left, And)
        assert isinstance(phi.right, Not)

    def test_implication_is_right_associative(self):
        phi = parse_formula("P(x) -> P(y) -> P(z)")
        assert parse_formula(to_text(phi)) == phi
        assert phi.right.left == Atom("P", (Var("y"),))

    def test_quantifier_scope_extends_right(self):
        phi = parse_formula("forall x. P(x) -> exists y. Q(x,y)", SMALL)
        assert isinstance(phi, Forall)
        assert free_vars(phi) == frozenset()

    def test_constants_quoted_or_declared(self):
        assert parse_formula('P("a")').args == (Const("a"),)
        assert parse_formula("P(a)", consts=("a",)).args == (Const("a"),)
        assert parse_formula("P(a)").args == (Var("a"),)
        assert parse_formula("P(null)").args == (Const(NULL),)

    def test_unknown_symbol_against_schema(self):
        with pytest.raises(ValueError):
            parse_formula("R(x)", SMALL)
        with pytest.raises(ValueError):
            parse_formula("P(x,y)", SMALL)

    def test_error_reports_position(self):
        with pytest.raises(FormulaSyntaxError) as err:
            parse_formula("P(x) and and P(y)")
        assert err.value.pos == 9

    def test_query_head_must_match_free_variables(self):
        with pytest.raises(ValueError):
            parse_query("ans(x) :- P(y)")
        q = parse_query("ans(y,x) :- Q(x,y)", SMALL)
        assert q.head == ("y", "x")

    def test_shadowed_binders_renamed(self):
        phi = parse_formula("exists x. P(x) and exists x. Q(x,x)", SMALL)
        inner = phi.body.right
        assert inner.var != "x"

    @given(st.integers(0, 10_000), st.sampled_from(["fo", "cq", "exists-positive"]))
    def test_print_parse_round_trip(self, seed, fragment):
        for phi in enum_formulas(SMALL, fragment, 3, seed, 3, kind="any", consts=("a",)):
            assert parse_formula(to_text(phi), SMALL, ("a",)) == phi


class TestSemantics:
    def test_quantifiers_range_over_active_domain(self):
        d = Instance(P2, {"P": [("a", "a"), ("a", "b")]})
        assert is_true(d, parse_formula("exists x. forall y. P(x,y)"))
        e = Instance(Schema({"P": 2, "R": 1}), {"P": [("a", "a"), ("a", "b")], "R": [("c",)]})
        assert not is_true(e, parse_formula("exists x. forall y. P(x,y)"))

    def test_empty_instance_universal_true_existential_false(self):
        d = Instance.empty(P2)
        assert is_true(d, parse_formula("forall x. P(x,x)"))
        assert not is_true(d, parse_formula("exists x. x = x"))

    def test_constant_outside_domain(self):
        d = Instance(P2, {"P": [("a", "b")]})
        assert not is_true(d, parse_formula('exists x. P(x,"z")'))
        assert is_true(d, parse_formula('"z" = "z"'))

    def test_null_equals_only_itself(self):
        d = Instance(P2, {"P": [("a", NULL)]})
        assert is_true(d, parse_formula("exists x. P(x, null)"))
        assert not is_true(d, parse_formula('exists x. P(x, "a") or P(null, x)'))

    def test_example5_answers(self):
        d1, d2 = fixture_profile("example5_exists.json")
        q = parse_query("ans(x) :- exists y. P(x,y)", P2)
        assert answer(d1, q).tuples == answer(d2, q).tuples == {("a",)}
        e1, e2 = fixture_profile("example5_forall.json")
        q = parse_query("ans(x) :- forall y. P(x,y)")
        assert len(answer(e1, q)) == 0 and len(answer(e2, q)) == 0

    def test_answer_universe_override(self):
        d = Instance(P2, {"P": [("a", "a")]})
        q = parse_query("ans(x) :- x = x")
        assert answer(d, q).tuples == {("a",)}
        assert answer(d, q, {"a", "b"}).tuples == {("a",), ("b",)}

    def test_sentence_answer_is_zero_width(self):
        d = Instance(P2, {"P": [("a", "a")]})
        yes = answer(d, Query((), parse_formula("exists x. P(x,x)")))
        no = answer(d, Query((), parse_formula("exists x. not P(x,x)")))
        assert yes.tuples == {()} and no.tuples == frozenset()

    @given(instances(), st.integers(0, 10_000))
    def test_algebra_matches_enumeration(self, d, seed):
        for q in enum_queries(SMALL, "fo", 3, seed, 4, consts=("a",)):
            assert answer(d, q) == answer_by_enumeration(d, q)

    @given(instances(), st.integers(0, 10_000))
    def test_answers_match_satisfaction(self, d, seed):
        for q in enum_queries(SMALL, "fo", 3, seed, 2):
            got = answer(d, q).tuples
            for row in answer_by_enumeration(d, q):
                assert satisfies(d, dict(zip(q.head, row)), q.body)
            assert all(len(r) == q.width for r in got)

    @given(instances(), st.integers(0, 10_000))
    def test_desugar_preserves_meaning(self, d, seed):
        for phi in enum_formulas(SMALL, "fo", 3, seed, 3, kind="sentence"):
            assert is_true(d, phi) == is_true(d, desugar(phi)) == is_true(d, resugar(desugar(phi)))


class TestFragments:
    def test_classification(self):
        f = classify(parse_formula("exists y. P(x) or Q(x,y)", SMALL))
        assert f.pos_existential and not f.pos_universal and f.conjunctive_query
        f = classify(parse_formula("forall y. P(x) and Q(x,y)", SMALL))
        assert f.pos_universal and not f.pos_existential
        assert not classify(parse_formula("exists y. x = y and P(x)", SMALL)).conjunctive_query
        assert classify(parse_formula('P("a")')).lit_pos
        assert classify(parse_formula('not Q("a","b")')).lit_neg
        assert not classify(parse_formula("not P(x)")).pos_existential

    def test_negated_universal_normalizes_to_existential(self):
        phi = parse_formula("not forall x. not P(x)")
        assert classify(phi).pos_existential
        assert isinstance(normal_form(phi), Exists)

    def test_unknown_fragment(self):
        with pytest.raises(ValueError):
            in_fragment(Eq(Var("x"), Var("x")), "datalog")

    @pytest.mark.parametrize("fragment", ["exists-positive", "forall-positive", "cq", "fo"])
    def test_generator_agrees_with_classifier(self, fragment):
        phis = list(enum_formulas(SMALL, fragment, 3, 11, 40))
        assert len(phis) == len(set(phis)) > 10
        assert all(in_fragment(phi, fragment) and depth(phi) <= 3 for phi in phis)

    def test_depth_one_is_atoms_and_equalities(self):
        for phi in enum_formulas(SMALL, "exists-positive", 1, 0, 20, kind="any"):
            assert isinstance(phi, (Atom, Eq))
