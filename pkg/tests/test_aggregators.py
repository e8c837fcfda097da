import itertools
import math

import pytest
from hypothesis import given, strategies as st

from conftest import SMALL, fixture_instance, instances, profiles
from dbagg import (NULL, AggregationError, AverageVoter, Dictatorship, DistanceBased,
                   FunctionalDependency, Instance, Intersection, Majority, MergeIncomplete,
                   Oligarchy, PermutedDictatorship, Profile, Quota, QuotaSpec,
                   RelationwiseAverageVoter, Schema, TrivialTop, TrivialZero, Union, aggregate,
                   distance_candidates, merge_relation, parse_rule)
from dbagg.aggregators import majority_quota, merge_rows, refines
from dbagg.core import support, symmetric_distance

FAC = Schema({"Students": 3, "Staff": 3})


def golden(name):
    return fixture_instance(name, FAC)


class TestExample3:
    def test_intersection(self, example3):
        assert aggregate(Intersection(), example3).winner == golden("example3_intersection.json")

    def test_union(self, example3):
        assert aggregate(Union(), example3).winner == golden("example3_union.json")

    def test_average_voter_picks_hr_instance(self, example3):
        out = aggregate(AverageVoter(), example3)
        assert out.winners == (example3.agent(1),)

    def test_merge(self, example3):
        assert aggregate(MergeIncomplete(), example3).winner == golden("example3_merge.json")

    def test_majority_by_support_count(self, example3):
        # independent oracle: keep tuples held by at least two of the three offices
        got = aggregate(Majority(), example3).winner
        for name in FAC.names:
            rows = {r for d in example3 for r in d[name]}
            expect = {r for r in rows if sum(r in d[name] for d in example3) >= 2}
            assert got[name] == expect
        assert got["Staff"] == {("01", "Rose", "Mech. Eng."), ("02", "Audrey", "Mech. Eng."),
                                ("03", "Karl", "History")}


class TestQuota:
    def test_majority_quota(self):
        assert [majority_quota(n) for n in range(1, 7)] == [1, 2, 2, 3, 3, 4]

    def test_quota_bounds(self):
        p = Profile([Instance.empty(SMALL)] * 2)
        with pytest.raises(AggregationError):
            aggregate(Quota(4), p)
        with pytest.raises(AggregationError):
            aggregate(Quota(0), p)
        with pytest.raises(AggregationError):
            aggregate(Quota(QuotaSpec({"P": 1})), p)

    def test_quota_zero_accepts_the_supplied_universe(self):
        p = Profile([Instance(SMALL, {"P": [("a",)]}), Instance.empty(SMALL)])
        out = aggregate(Quota(0, extra={"P": [("b",)]}), p).winner
        assert out["P"] == {("a",), ("b",)} and out["Q"] == frozenset()
        assert aggregate(TrivialZero({"P": [("c",)]}), p).winner["P"] == {("a",), ("c",)}
        with pytest.raises(AggregationError):
            TrivialZero(None).apply(p)

    def test_per_symbol_quotas(self):
        p = Profile([Instance(SMALL, {"P": [("a",)], "Q": [("a", "b")]}),
                     Instance(SMALL, {"P": [("b",)], "Q": [("a", "b")]})])
        out = aggregate(Quota(QuotaSpec({"P": 1, "Q": 2})), p).winner
        assert out["P"] == {("a",), ("b",)} and out["Q"] == {("a", "b")}

    def test_per_tuple_exception(self):
        p = Profile([Instance(SMALL, {"P": [("a",), ("b",)]}), Instance(SMALL, {"P": [("b",)]})])
        spec = QuotaSpec({"P": 2, "Q": 2}, {("P", ("a",)): 1})
        assert not spec.uniform
        assert aggregate(Quota(spec), p).winner["P"] == {("a",), ("b",)}

    @given(profiles())
    def test_named_rules_are_quota_rules(self, p):
        n = p.n
        assert aggregate(Union(), p).winner == aggregate(Quota(1), p).winner
        assert aggregate(Intersection(), p).winner == aggregate(Quota(n), p).winner
        assert aggregate(Majority(), p).winner == aggregate(Quota(math.ceil((n + 1) / 2)), p).winner
        assert aggregate(TrivialTop(), p).winner.is_empty()

    @given(profiles())
    def test_quota_outcomes_shrink_as_quota_grows(self, p):
        outs = [aggregate(Quota(q), p).winner for q in range(1, p.n + 2)]
        assert all(b <= a for a, b in zip(outs, outs[1:]))

    @given(profiles())
    def test_quota_matches_support_definition(self, p):
        for q in range(1, p.n + 1):
            out = aggregate(Quota(q), p).winner
            for name in p.schema.names:
                assert out[name] == {r for r in p.union(name) if len(support(p, name, r)) >= q}


def brute_distance(p):
    """Argmin over every instance whose tuples come from the profile union."""
    names = p.schema.names
    pools = [sorted(p.union(n)) for n in names]
    best, out = None, set()
    for picks in itertools.product(*[[set(c) for k in range(len(pool) + 1)
                                      for c in itertools.combinations(pool, k)] for pool in pools]):
        cand = Instance(p.schema, dict(zip(names, picks)))
        cost = sum(symmetric_distance(d, cand) for d in p)
        if best is None or cost < best:
            best, out = cost, {cand}
        elif cost == best:
            out.add(cand)
    return out


class TestDistance:
    @given(profiles(max_rows=2))
    def test_matches_brute_force(self, p):
        assert set(aggregate(DistanceBased(), p).winners) == brute_distance(p)

    def test_even_split_ties(self):
        s = Schema({"P": 1})
        p = Profile([Instance(s, {"P": [("a",)]}), Instance(s, {"P": []})])
        out = aggregate(DistanceBased(), p)
        assert not out.resolute and len(out) == 2
        assert out.winner == Instance(s, {"P": []})

    def test_constraint_filter(self):
        s = Schema({"P": 2})
        fd = FunctionalDependency("P", (1,), (2,))
        p = Profile([Instance(s, {"P": [("a", "b"), ("a", "c")]})] * 3)
        free = aggregate(DistanceBased(), p).winners
        assert free == (p[0],)
        filtered = aggregate(DistanceBased(constraints=(fd,)), p).winners
        assert {w["P"] for w in filtered} == {frozenset({("a", "b")}), frozenset({("a", "c")})}

    def test_candidate_cap(self):
        s = Schema({"P": 1})
        p = Profile([Instance(s, {"P": [(v,) for v in "abcdefghijk"]})])
        with pytest.raises(AggregationError):
            list(distance_candidates(p, cap=1000))

    def test_explicit_candidates(self):
        s = Schema({"P": 1})
        a = Instance(s, {"P": [("a",)]})
        p = Profile([a, a])
        assert aggregate(DistanceBased(candidates=(Instance.empty(s),)), p).winners == (
            Instance.empty(s),)


class TestAverageVoters:
    @given(profiles())
    def test_average_voter_returns_submitted_instances(self, p):
        out = aggregate(AverageVoter(), p)
        assert all(w in p for w in out)
        costs = {d: sum(symmetric_distance(d, e) for e in p) for d in p}
        assert {w for w in out} == {d for d in p if costs[d] == min(costs.values())}

    def test_relationwise_mixes_agents(self):
        a = Instance(SMALL, {"P": [("a",)], "Q": [("a", "a")]})
        b = Instance(SMALL, {"P": [("a",)], "Q": [("b", "b")]})
        c = Instance(SMALL, {"P": [("b",)], "Q": [("b", "b")]})
        out = aggregate(RelationwiseAverageVoter(), Profile([a, b, c]))
        assert out.winners == (b,)
        mixed = aggregate(RelationwiseAverageVoter(), Profile([a, c, Instance(SMALL, {
            "P": [("a",)], "Q": [("b", "b")]})])).winner
        assert mixed == b

    @given(profiles())
    def test_relationwise_winners_cover_per_symbol_minimizers(self, p):
        for w in aggregate(RelationwiseAverageVoter(), p):
            for name in p.schema.names:
                assert any(w[name] == d[name] for d in p)


class TestDictators:
    @given(profiles())
    def test_dictatorship_and_oligarchy(self, p):
        assert aggregate(Dictatorship(1), p).winner == p.agent(1)
        olig = aggregate(Oligarchy(frozenset({1, 2})), p).winner
        for name in p.schema.names:
            assert olig[name] == p.agent(1)[name] & p.agent(2)[name]

    def test_agent_out_of_range(self):
        p = Profile([Instance.empty(SMALL)] * 3)
        with pytest.raises(AggregationError):
            aggregate(Dictatorship(5), p)

    def test_permuted_dictatorship(self):
        s = Schema({"P": 2})
        rule = PermutedDictatorship(1, (("a", "b"), ("b", "a")))
        p = Profile([Instance(s, {"P": [("a", "c")]}), Instance.empty(s)])
        assert aggregate(rule, p).winner == Instance(s, {"P": [("b", "c")]})


class TestMerge:
    def test_refines(self):
        assert refines(("a", "b"), ("a", NULL))
        assert not refines(("a", NULL), ("a", "b"))
        assert refines(("a", "b"), ("a", "b"))

    def test_disagreeing_coordinates_become_null(self):
        assert merge_rows([{("a", "b")}, {("a", "c")}]) == {("a", NULL)}

    def test_dominated_tuples_are_pruned(self):
        rels = [{("a", "b"), ("c", "d")}, {("a", "b"), ("c", "e")}]
        assert merge_rows(rels) == {("a", "b"), ("c", NULL)}

    def test_empty_relation_empties_the_merge(self):
        assert merge_rows([{("a",)}, set()]) == frozenset()

    def test_selection_cap(self):
        rels = [{(str(i),) for i in range(20)}] * 3
        with pytest.raises(AggregationError):
            merge_rows(rels, cap=1000)

    @given(instances())
    def test_unanimous_profile_is_fixed(self, d):
        p = Profile([d, d, d])
        assert aggregate(MergeIncomplete(), p).winner == d

    @given(profiles())
    def test_merge_is_an_antichain(self, p):
        for name in p.schema.names:
            rows = merge_relation(p, name)
            assert not any(u != v and refines(u, v) for u in rows for v in rows)


class TestDescriptors:
    @pytest.mark.parametrize("text", ["union", "intersection", "majority", "distance",
                                      "avg-voter", "relwise-avg", "merge", "quota:2",
                                      "dictator:1", "trivial-top"])
    def test_describe_round_trips(self, text):
        assert parse_rule(text).describe() == text

    def test_structured_descriptors(self):
        assert parse_rule("quota:P=1,Q=2") == Quota(QuotaSpec({"P": 1, "Q": 2}))
        assert parse_rule("oligarchy:1,3") == Oligarchy(frozenset({1, 3}))

    @pytest.mark.parametrize("text", ["borda", "quota:x", "dictator:", "quota"])
    def test_bad_descriptors(self, text):
        with pytest.raises(ValueError):
            parse_rule(text)


def test_outcome_order_is_canonical():
    s = Schema({"P": 1})
    p = Profile([Instance(s, {"P": [("b",)]}), Instance(s, {"P": [("a",)]})])
    first = aggregate(AverageVoter(), p).winners
    again = aggregate(AverageVoter(), Profile(reversed(p))).winners
    assert first == again and first[0]["P"] == {("a",)}

