import math

import pytest
from hypothesis import given, strategies as st

from dbagg import FunctionalDependency, Schema
from dbagg.constraints import holds
from dbagg.oracle import (SpaceSpec, enum_formulas, enum_instances, enum_profiles,
                          instance_space)

P1, P2 = Schema({"P": 1}), Schema({"P": 2})


def closed_form(schema, domain, k):
    """Sum over symbols of C(|domain|^arity, <= k), multiplied out."""
    total = 1
    for name in schema.names:
        rows = len(domain) ** schema.arity(name)
        total *= sum(math.comb(rows, j) for j in range(min(k, rows) + 1))
    return total


def test_powerset_of_two_values():
    got = list(enum_instances(SpaceSpec(P1, ("a", "b"), 2)))
    assert [sorted(d["P"]) for d in got] == [[], [("a",)], [("b",)], [("a",), ("b",)]]


def test_binary_singletons():
    assert len(list(enum_instances(SpaceSpec(P2, ("a", "b"), 1)))) == 5


@pytest.mark.parametrize("schema,domain,k", [
    (P1, ("a", "b", "c"), 2), (P2, ("a", "b", "c"), 3), (Schema({"P": 1, "Q": 2}), ("a", "b"), 2)])
def test_counts_match_combinatorics(schema, domain, k):
    space = SpaceSpec(schema, domain, k)
    assert space.instance_count() == closed_form(schema, domain, k)
    got = list(enum_instances(space))
    assert len(got) == len(set(got)) == closed_form(schema, domain, k)


def test_fd_filter_is_vacuous_on_single_tuples():
    fd = FunctionalDependency("P", (1,), (2,))
    assert len(instance_space(P2, ("a", "b"), 1, constraints=(fd,))) == 5


def test_fd_filter_counts():
    fd = FunctionalDependency("P", (1,), (2,))
    got = instance_space(P2, ("a", "b", "c"), 3, constraints=(fd,))
    assert len(got) == 64 and all(holds(d, fd) for d in got)


def test_profile_products():
    assert len(list(enum_profiles(SpaceSpec(P1, ("a", "b"), 2, agents=2)))) == 16
    fd = FunctionalDependency("P", (1,), (2,))
    sp = SpaceSpec(P2, ("a",), 2, agents=2, constraints=(fd,))
    assert len(list(enum_instances(sp))) == 2
    assert len(list(enum_profiles(sp))) == 4


def test_cap():
    with pytest.raises(ValueError):
        list(enum_profiles(SpaceSpec(P2, ("a", "b", "c"), 3, agents=3, cap=1000)))


def test_sampled_streams_are_reproducible():
    sp = SpaceSpec(P2, ("a", "b", "c"), 3, agents=3, mode="sampled", seed=7, count=100)
    first, second = list(enum_profiles(sp)), list(enum_profiles(sp))
    assert first == second and len(first) == 100
    other = list(enum_profiles(SpaceSpec(P2, ("a", "b", "c"), 3, agents=3, mode="sampled",
                                         seed=8, count=100)))
    assert other != first


def test_sampled_members_respect_the_filter():
    fd = FunctionalDependency("P", (1,), (2,))
    sp = SpaceSpec(P2, ("a", "b", "c"), 3, agents=2, mode="sampled", seed=3, count=50,
                   constraints=(fd,))
    assert all(holds(d, fd) for p in enum_profiles(sp) for d in p)


def test_bad_configuration():
    with pytest.raises(ValueError):
        SpaceSpec(P1, ("a",), 1, mode="random")
    with pytest.raises(ValueError):
        SpaceSpec(P1, ("a",), 1, rng="pcg64")
    with pytest.raises(ValueError):
        list(enum_formulas(P1, "horn", 2, 0, 5))


def test_describe_mentions_bounds():
    text = SpaceSpec(P2, ("a", "b"), 2, agents=3).describe()
    assert "max_tuples=2" in text and "n=3" in text


@given(st.integers(0, 1000))
def test_formula_streams_deterministic(seed):
    a = list(enum_formulas(P2, "fo", 3, seed, 10))
    assert a == list(enum_formulas(P2, "fo", 3, seed, 10))


def test_sentences_have_no_free_variables():
    from dbagg.folang import free_vars

    for frag in ("exists-positive", "forall-positive", "fo"):
        for phi in enum_formulas(P2, frag, 3, 1, 20, kind="sentence"):
            assert not free_vars(phi)
