import pytest

from dbagg import (NULL, AverageVoter, Dictatorship, DistanceBased, Instance, Intersection,
                   Majority, MergeIncomplete, Oligarchy, Profile, Quota, QuotaSpec,
                   RelationwiseAverageVoter, Schema, TrivialTop, TrivialZero, Union)
from dbagg.aggregators import FunctionRule
from dbagg.axioms import (AXIOMS, axiom_matrix, check_anonymity, check_axiom,
                          check_groundedness, check_independence, check_monotonicity,
                          check_neg_neutrality, check_perm_neutrality, check_pos_neutrality,
                          check_unanimity, verify_quota_lemma)
from dbagg.core import support
from dbagg.oracle import SpaceSpec, enum_profiles

P1 = Schema({"P": 1})
UNARY3 = list(enum_profiles(SpaceSpec(P1, ("a", "b"), 2, agents=3)))
FULL = {"P": [("a",), ("b",)]}
SWAP = [{"a": "b", "b": "a"}]


def unary(*sets):
    return Profile(Instance(P1, {"P": [(v,) for v in s]}) for s in sets)


class TestSingleAxioms:
    def test_union_unanimous_and_grounded(self):
        assert check_unanimity(Union(), UNARY3).passed
        assert check_groundedness(Union(), UNARY3).passed

    def test_trivial_top_violates_unanimity(self):
        rep = check_unanimity(TrivialTop(), UNARY3)
        assert not rep.passed
        p = rep.witness["profile"]
        assert rep.witness["tuple"] in p.intersection("P")

    def test_trivial_zero_violates_groundedness(self):
        rep = check_groundedness(TrivialZero({"P": [("c",)]}), UNARY3)
        assert not rep.passed and rep.witness["tuple"] == ("c",)

    def test_dictatorship_is_not_anonymous(self):
        rep = check_anonymity(Dictatorship(1), UNARY3)
        assert not rep.passed
        p, order = rep.witness["profile"], rep.witness["agent_order"]
        assert p.agent(1) != p.permuted(order).agent(1)

    def test_independence_exact_pairs(self):
        rep = check_independence(AverageVoter(), enum_profiles(
            SpaceSpec(P1, ("a", "b", "c"), 3, agents=3)))
        assert not rep.passed
        p, q = rep.witness["profiles"]
        name, u = rep.witness["symbol"], rep.witness["tuple"]
        assert support(p, name, u) == support(q, name, u)
        assert any(u in w[name] for w in AverageVoter().apply(p))
        assert any(u not in w[name] for w in AverageVoter().apply(q))

    def test_union_fails_negative_neutrality(self):
        rep = check_neg_neutrality(Union(), UNARY3)
        assert not rep.passed
        p, u, v = rep.witness["profile"], rep.witness["tuple"], rep.witness["other_tuple"]
        everyone = frozenset({1, 2, 3})
        assert support(p, "P", u) == everyone - support(p, "P", v)

    def test_majority_odd_n_is_negatively_neutral(self):
        assert check_neg_neutrality(Majority(), UNARY3, FULL).passed

    def test_majority_even_n_is_not(self):
        space = enum_profiles(SpaceSpec(P1, ("a", "b"), 2, agents=2))
        assert not check_neg_neutrality(Majority(), space, FULL).passed

    def test_positive_neutrality_catches_tuple_bias(self):
        biased = Quota(QuotaSpec({"P": 2}, {("P", ("a",)): 1}))
        rep = check_pos_neutrality(biased, UNARY3)
        assert not rep.passed
        assert {rep.witness["tuple"], rep.witness["other_tuple"]} >= {("a",)}

    def test_permutation_neutrality(self):
        assert check_perm_neutrality(Majority(), UNARY3, SWAP).passed
        biased = FunctionRule("keep-a", lambda p: Instance(P1, {"P": [("a",)]}))
        rep = check_perm_neutrality(biased, UNARY3, SWAP)
        assert not rep.passed
        with pytest.raises(ValueError):
            check_perm_neutrality(Majority(), UNARY3, [{"a": "b"}])

    def test_monotonicity(self):
        assert check_monotonicity(Quota(2), UNARY3).passed
        rep = check_monotonicity(AverageVoter(), enum_profiles(
            SpaceSpec(P1, ("a", "b", "c"), 3, agents=3)))
        assert not rep.passed
        p, q = rep.witness["profiles"]
        assert rep.witness["tuple"] in rep.witness["winner"]["P"]

    def test_replay_space_reproduces(self):
        rep = check_neg_neutrality(Union(), UNARY3)
        assert not check_neg_neutrality(Union(), rep.replay_space).passed
        rep = check_monotonicity(RelationwiseAverageVoter(), enum_profiles(
            SpaceSpec(P1, ("a", "b", "c"), 3, agents=3)))
        assert not check_monotonicity(RelationwiseAverageVoter(), rep.replay_space).passed

    def test_unknown_axiom(self):
        with pytest.raises(ValueError):
            check_axiom("Z", Union(), UNARY3)


@pytest.fixture(scope="module")
def matrix():
    rules = [Union(), Intersection(), Majority(), Dictatorship(1), MergeIncomplete(),
             Oligarchy(frozenset({1, 2}))]
    return axiom_matrix(rules, UNARY3, AXIOMS, FULL, SWAP)


class TestMatrix:
    def failures(self, matrix, rule):
        return {a for a in AXIOMS if not matrix[(rule, a)].passed}

    def test_quota_rules(self, matrix):
        assert self.failures(matrix, "union") == {"N-"}
        assert self.failures(matrix, "intersection") == {"N-"}
        assert self.failures(matrix, "majority") == set()

    def test_dictator_and_oligarchy(self, matrix):
        assert self.failures(matrix, "dictator:1") == {"A"}
        assert self.failures(matrix, "oligarchy:1,2") == {"A", "N-"}

    def test_merge_on_null_free_space(self, matrix):
        # merge can invent null-padded tuples, so it is not grounded
        assert self.failures(matrix, "merge") == {"G", "N-"}


class TestMergeWithNulls:
    SPACE = list(enum_profiles(SpaceSpec(Schema({"P": 2}), ("a", NULL), 2, agents=2)))

    def test_space_size(self):
        assert len(self.SPACE) == 121

    @pytest.mark.parametrize("axiom", ["U", "I", "N+", "M"])
    def test_fails_once_inputs_carry_nulls(self, axiom):
        assert not check_axiom(axiom, MergeIncomplete(), self.SPACE).passed

    def test_still_anonymous(self):
        assert check_anonymity(MergeIncomplete(), self.SPACE).passed

    def test_monotonicity_witness(self):
        rep = check_monotonicity(MergeIncomplete(), self.SPACE)
        p, q = rep.witness["profiles"]
        u = rep.witness["tuple"]
        assert all(d["P"] <= e["P"] for d, e in zip(p, q))
        assert u in MergeIncomplete().apply(p)[0]["P"]
        assert u not in MergeIncomplete().apply(q)[0]["P"]


def test_merge_negative_neutrality_on_staff_tuples(example3):
    audrey, aubrey = ("02", "Audrey", "Mech. Eng."), ("02", "Aubrey", "Mech. Eng.")
    assert support(example3, "Staff", audrey) == {1, 2}
    assert support(example3, "Staff", aubrey) == {3}
    merged = MergeIncomplete().apply(example3)[0]["Staff"]
    assert audrey not in merged and aubrey not in merged
    assert not check_neg_neutrality(MergeIncomplete(), [example3]).passed


def test_average_rules_on_larger_space():
    space = list(enum_profiles(SpaceSpec(P1, ("a", "b", "c"), 3, agents=3)))
    for rule in (AverageVoter(), RelationwiseAverageVoter()):
        assert not check_independence(rule, space).passed
        assert check_unanimity(rule, space).passed
    # with three agents the unconstrained distance rule is majority
    assert check_independence(DistanceBased(), space).passed


def test_quota_lemma_direction():
    space = enum_profiles(SpaceSpec(Schema({"P": 1, "Q": 1}), ("a", "b"), 2, agents=2))
    rep = verify_quota_lemma(space, [1, 2, 3, QuotaSpec({"P": 1, "Q": 2})])
    assert rep.holds and len(rep.reports) == 12
    assert "converse" in rep.note


def test_reports_print_witness():
    rep = check_neg_neutrality(Union(), [unary("a", "b")])
    assert "counterexample" in str(rep) and "tuple=" in str(rep)
