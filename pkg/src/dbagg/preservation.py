"""Does querying commute with aggregation?

The left side aggregates first and then queries every winner; the right side
queries every agent and aggregates the answer relations with the induced
rule, which is the same rule applied to single-symbol wrapper instances.

Answer semantics.  With ``universe="common"`` (the default here) the head
variables of every evaluation range over one shared finite set: the active
domains of all agents and all winners together.  Per-instance active domains
(``universe="adom"``) make the two sides range over different sets, so that
even a bare disjunction such as ``P(x,x) or P(y,y)`` stops commuting under
union.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

from .aggregators import RelationwiseAverageVoter, Rule, aggregate
from .core import Instance, Profile, Schema, active_domain, row_key
from .folang import AnswerSet, Query, classify
from .folang import answer as _answer

WRAPPER_SYMBOL = "ANS"


@lru_cache(maxsize=1 << 18)
def answer(d: Instance, q: Query, universe=None) -> AnswerSet:
    """Memoised query answering; sweeps revisit the same instances often."""
    return _answer(d, q, universe)


def _winners(rule: Rule, p: Profile, outcomes) -> tuple:
    return outcomes(p) if outcomes is not None else aggregate(rule, p).winners


@dataclass(frozen=True)
class AnswerProfile:
    answers: tuple

    def __post_init__(self):
        answers = tuple(self.answers)
        object.__setattr__(self, "answers", answers)
        if not answers:
            raise ValueError("an answer profile needs at least one answer set")
        widths = {a.width for a in answers}
        if len(widths) != 1:
            raise ValueError(f"answer sets have different widths: {sorted(widths)}")

    @property
    def width(self) -> int:
        return self.answers[0].width

    def __iter__(self):
        return iter(self.answers)

    def __len__(self):
        return len(self.answers)


def _sorted_sets(sets) -> tuple:
    uniq = {frozenset(s.tuples): s for s in sets}
    if len(uniq) == 1:
        return tuple(uniq.values())
    return tuple(uniq[k] for k in sorted(uniq, key=lambda k: (len(k), sorted(map(row_key, k)))))


@lru_cache(maxsize=None)
def _wrapper_schema(width: int) -> Schema:
    return Schema({WRAPPER_SYMBOL: width})


def wrap(a: AnswerSet) -> Instance:
    if a.width < 1:
        raise ValueError("only queries with at least one free variable induce an aggregator")
    return Instance._trusted(_wrapper_schema(a.width), {WRAPPER_SYMBOL: a.tuples})


def induced_aggregate(rule: Rule, ap: AnswerProfile) -> tuple:
    """Winners of the induced rule, as canonically ordered answer sets."""
    if not isinstance(ap, AnswerProfile):
        ap = AnswerProfile(tuple(ap))
    outcome = aggregate(rule, Profile(wrap(a) for a in ap))
    return _sorted_sets(AnswerSet(ap.width, w[WRAPPER_SYMBOL]) for w in outcome.winners)


def common_universe(instances: Iterable[Instance]) -> frozenset:
    out = set()
    for d in instances:
        out |= active_domain(d)
    return frozenset(out)


def _universe(mode, p: Profile, winners) -> frozenset | None:
    if mode == "common":
        return common_universe(list(p) + list(winners))
    if mode == "adom":
        return None
    return frozenset(mode)


@dataclass(frozen=True)
class CommutationReport:
    rule: str
    query: Query
    left: tuple   # answers on the aggregated winners
    right: tuple  # induced aggregation of the per-agent answers

    @property
    def commutes(self) -> bool:
        return {frozenset(a.tuples) for a in self.left} == {frozenset(a.tuples) for a in self.right}

    @property
    def verdict(self) -> str:
        return "commutes" if self.commutes else "diverges"

    @property
    def diff(self) -> tuple:
        """Answer tuples found only on the left, and only on the right."""
        left = set().union(*(a.tuples for a in self.left))
        right = set().union(*(a.tuples for a in self.right))
        return frozenset(left - right), frozenset(right - left)


def agent_answers(q: Query, p: Profile, universe) -> AnswerProfile:
    return AnswerProfile(tuple(answer(d, q, universe) for d in p))


def check_commutes(rule: Rule, q: Query, p: Profile, universe="common",
                   outcomes=None) -> CommutationReport:
    """``outcomes`` (an :class:`~dbagg.axioms.Outcomes`) reuses winners across queries."""
    winners = _winners(rule, p, outcomes)
    u = _universe(universe, p, winners)
    left = _sorted_sets(answer(w, q, u) for w in winners)
    right = induced_aggregate(rule, agent_answers(q, p, u))
    return CommutationReport(rule.describe(), q, left, right)


def _intersection(sets) -> frozenset:
    sets = [s.tuples for s in sets]
    return frozenset.intersection(*sets)


def check_unanimity_containment(q: Query, rule: Rule, p: Profile, universe="common",
                                outcomes=None) -> bool:
    """Answers shared by every agent are answers on every winner."""
    if not classify(q.body).pos_universal:
        raise ValueError(f"{q.body} is not positive universal")
    winners = _winners(rule, p, outcomes)
    u = _universe(universe, p, winners)
    shared = _intersection(agent_answers(q, p, u))
    return all(shared <= answer(w, q, u).tuples for w in winners)


def check_groundedness_containment(q: Query, rule: Rule, p: Profile, universe="common",
                                   outcomes=None) -> bool:
    """Every answer on a winner is an answer for some agent."""
    if not classify(q.body).pos_existential:
        raise ValueError(f"{q.body} is not positive existential")
    winners = _winners(rule, p, outcomes)
    u = _universe(universe, p, winners)
    some = frozenset().union(*(a.tuples for a in agent_answers(q, p, u)))
    return all(answer(w, q, u).tuples <= some for w in winners)


def ave_answers(ap) -> tuple:
    """Answer sets of the profile at minimal total symmetric distance to the others."""
    answers = [a.tuples for a in ap]
    width = next(iter(ap)).width
    costs = [sum(len(a ^ b) for b in answers) for a in answers]
    best = min(costs)
    return _sorted_sets(AnswerSet(width, a) for a, c in zip(answers, costs) if c == best)


def check_ave_containment(q: Query, p: Profile, rule: Rule | None = None,
                          universe="common", outcomes=None) -> bool:
    """Each winner's answers fit inside some member of the averaged answers."""
    rule = rule or RelationwiseAverageVoter()
    winners = _winners(rule, p, outcomes)
    u = _universe(universe, p, winners)
    ave = ave_answers(agent_answers(q, p, u))
    return all(any(answer(w, q, u).tuples <= a.tuples for a in ave) for w in winners)
