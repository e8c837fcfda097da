"""Aggregation rules for profiles of database instances.

Every rule is a small frozen dataclass; :func:`aggregate` applies it to a
profile and returns an :class:`AggregationOutcome` holding the canonical,
deduplicated set of winning instances (a single winner for resolute rules).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field

from .core import (NULL, Instance, Profile, SchemaError, intersection_instance, permute,
                   row_key, symmetric_distance, union_instance)

DEFAULT_CANDIDATE_CAP = 1 << 20
DEFAULT_SELECTION_CAP = 10 ** 6


class AggregationError(ValueError):
    """Rule parameters are invalid for the profile, or a search cap was hit."""


@dataclass(frozen=True)
class AggregationOutcome:
    winners: tuple

    def __post_init__(self):
        uniq = {w: None for w in self.winners}
        if not uniq:
            raise AggregationError("an aggregation outcome needs at least one winner")
        if len(uniq) > 1:
            object.__setattr__(self, "winners", tuple(sorted(uniq, key=Instance.sort_key)))
        else:
            object.__setattr__(self, "winners", tuple(uniq))

    @property
    def resolute(self) -> bool:
        return len(self.winners) == 1

    @property
    def winner(self) -> Instance:
        """The canonically smallest winner (lexicographic tie-break)."""
        return self.winners[0]

    def __iter__(self):
        return iter(self.winners)

    def __len__(self):
        return len(self.winners)


# ------------------------------------------------------------------ rules


@dataclass(frozen=True)
class QuotaSpec:
    """Per-symbol default quotas with optional per-tuple exceptions."""

    default_quota: Mapping[str, int]
    exceptions: Mapping[tuple, int] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "default_quota", dict(self.default_quota))
        object.__setattr__(self, "exceptions",
                           {(s, tuple(r)): q for (s, r), q in dict(self.exceptions).items()})

    def __hash__(self):
        return hash((tuple(sorted(self.default_quota.items())),
                     tuple(sorted(self.exceptions.items(), key=repr))))

    def quota(self, symbol: str, row) -> int:
        q = self.exceptions.get((symbol, row))
        return self.default_quota[symbol] if q is None else q

    @property
    def uniform(self) -> bool:
        return not self.exceptions and len(set(self.default_quota.values())) <= 1

    @classmethod
    def uniform_quota(cls, schema, q: int) -> "QuotaSpec":
        return cls({name: q for name in schema.names})

    def validate(self, profile: Profile) -> None:
        n = profile.n
        for name in profile.schema.names:
            if name not in self.default_quota:
                raise AggregationError(f"no quota given for symbol {name}")
        for q in list(self.default_quota.values()) + list(self.exceptions.values()):
            if not 0 <= q <= n + 1:
                raise AggregationError(f"quota {q} outside 0..{n + 1}")


class Rule:
    """Base class; subclasses implement ``apply(profile) -> iterable of instances``."""

    resolute = True

    def apply(self, p: Profile) -> Iterable[Instance]:
        raise NotImplementedError

    def describe(self) -> str:
        return type(self).__name__


@dataclass(frozen=True)
class Union(Rule):
    def apply(self, p):
        return [union_instance(p)]

    def describe(self):
        return "union"


@dataclass(frozen=True)
class Intersection(Rule):
    def apply(self, p):
        return [intersection_instance(p)]

    def describe(self):
        return "intersection"


def _extra_rows(extra, symbol):
    if extra is None:
        return ()
    return [tuple(r) for r in extra.get(symbol, ())]


def _quota_instance(p: Profile, quota_of: Callable, extra) -> Instance:
    rels = {}
    for name in p.schema.names:
        counts = Counter()
        for d in p:
            counts.update(d[name])
        for row in _extra_rows(extra, name):
            counts.setdefault(row, 0)
        rels[name] = frozenset(r for r, c in counts.items() if c >= quota_of(name, r))
    return Instance._trusted(p.schema, rels)


@dataclass(frozen=True)
class Quota(Rule):
    """Quota rule.  A tuple is accepted iff its support reaches its quota.

    ``quota`` is either an int (uniform) or a :class:`QuotaSpec`.  When some
    default quota is 0 every tuple of the (infinite) universe would be
    accepted, so a finite candidate universe must be supplied via
    ``extra`` (a mapping from symbols to extra tuples, may be empty); the
    universe is then the union of the profile plus those tuples.
    """

    quota: object
    extra: Mapping | None = None

    def __hash__(self):
        extra = None if self.extra is None else tuple(
            sorted((k, tuple(sorted(map(tuple, v), key=row_key))) for k, v in self.extra.items()))
        return hash((self.quota, extra))

    def spec_for(self, p: Profile) -> QuotaSpec:
        if isinstance(self.quota, QuotaSpec):
            spec = self.quota
        else:
            spec = QuotaSpec.uniform_quota(p.schema, int(self.quota))
        spec.validate(p)
        return spec

    def apply(self, p):
        spec = self.spec_for(p)
        if self.extra is None and 0 in spec.default_quota.values():
            raise AggregationError(
                "quota 0 accepts every tuple of the domain; pass a finite candidate universe")
        extra = dict(self.extra or {})
        for (name, row) in spec.exceptions:
            extra.setdefault(name, [])
            extra[name] = list(extra[name]) + [row]
        return [_quota_instance(p, spec.quota, extra)]

    def describe(self):
        if isinstance(self.quota, QuotaSpec):
            return "quota:" + ",".join(f"{k}={v}" for k, v in sorted(self.quota.default_quota.items()))
        return f"quota:{self.quota}"


def majority_quota(n: int) -> int:
    return math.ceil((n + 1) / 2)


@dataclass(frozen=True)
class Majority(Rule):
    def apply(self, p):
        q = majority_quota(p.n)
        return [_quota_instance(p, lambda _s, _r: q, None)]

    def describe(self):
        return "majority"


@dataclass(frozen=True)
class TrivialZero(Rule):
    """Uniform quota 0 relative to the union plus ``extra`` candidate tuples."""

    extra: Mapping | None = None

    def __hash__(self):
        return hash(repr(self.extra))

    def apply(self, p):
        if self.extra is None:
            raise AggregationError(
                "quota 0 accepts every tuple of the domain; pass a finite candidate universe")
        return [_quota_instance(p, lambda _s, _r: 0, self.extra)]

    def describe(self):
        return "quota:0"


@dataclass(frozen=True)
class TrivialTop(Rule):
    """Uniform quota n+1: nothing is ever accepted."""

    def apply(self, p):
        return [Instance.empty(p.schema)]

    def describe(self):
        return "trivial-top"


def _powerset(rows):
    rows = sorted(rows, key=row_key)
    for k in range(len(rows) + 1):
        for combo in itertools.combinations(rows, k):
            yield frozenset(combo)


def distance_candidates(p: Profile, space="union", cap: int = DEFAULT_CANDIDATE_CAP) -> Iterator[Instance]:
    """Candidate instances for the distance-based rule.

    ``space="union"`` yields every instance whose relations are subsets of the
    profile's per-symbol unions; an explicit iterable of instances passes
    through unchanged.
    """
    if space != "union":
        yield from space
        return
    unions = {name: p.union(name) for name in p.schema.names}
    total = 1
    for rows in unions.values():
        total *= 2 ** len(rows)
    if total > cap:
        raise AggregationError(f"candidate space has {total} instances, cap is {cap}")
    names = p.schema.names
    for combo in itertools.product(*(list(_powerset(unions[n])) for n in names)):
        yield Instance._trusted(p.schema, dict(zip(names, combo)))


def _admissible(d: Instance, constraints) -> bool:
    from .constraints import holds
    from .folang import Formula, satisfies

    for c in constraints:
        if isinstance(c, Formula):
            if not satisfies(d, {}, c):
                return False
        elif not holds(d, c):
            return False
    return True


@dataclass(frozen=True)
class DistanceBased(Rule):
    """Argmin of the summed symmetric distance over a candidate space.

    ``candidates`` is ``"union"`` (all sub-instances of the profile union) or
    a tuple of explicit candidate instances.  Candidates violating any of
    ``constraints`` (structured constraints or FO sentences) are skipped.
    """

    candidates: object = "union"
    constraints: tuple = ()
    cap: int = DEFAULT_CANDIDATE_CAP
    resolute = False

    def apply(self, p):
        best, winners = None, []
        for cand in distance_candidates(p, self.candidates, self.cap):
            if self.constraints and not _admissible(cand, self.constraints):
                continue
            cost = sum(symmetric_distance(d, cand) for d in p)
            if best is None or cost < best:
                best, winners = cost, [cand]
            elif cost == best:
                winners.append(cand)
        if not winners:
            raise AggregationError("no admissible candidate instance")
        return winners

    def describe(self):
        return "distance"


@dataclass(frozen=True)
class AverageVoter(Rule):
    """The submitted instances closest in total to all others."""

    resolute = False

    def apply(self, p):
        costs = [sum(symmetric_distance(d, e) for e in p) for d in p]
        best = min(costs)
        return [d for d, c in zip(p, costs) if c == best]

    def describe(self):
        return "avg-voter"


def relation_minimizers(relations: list) -> list:
    """Distinct relations (sets) minimising the summed symmetric difference to all others."""
    costs = [sum(len(r ^ s) for s in relations) for r in relations]
    best = min(costs)
    out = []
    for r, c in zip(relations, costs):
        if c == best and r not in out:
            out.append(r)
    return out


@dataclass(frozen=True)
class RelationwiseAverageVoter(Rule):
    """Per-symbol average voter; winners combine the per-symbol minimisers."""

    resolute = False

    def apply(self, p):
        names = p.schema.names
        choices = [relation_minimizers([d[n] for d in p]) for n in names]
        return [Instance._trusted(p.schema, dict(zip(names, combo)))
                for combo in itertools.product(*choices)]

    def describe(self):
        return "relwise-avg"


@dataclass(frozen=True)
class Dictatorship(Rule):
    agent: int

    def apply(self, p):
        if not 1 <= self.agent <= p.n:
            raise AggregationError(f"dictator {self.agent} outside 1..{p.n}")
        return [p.agent(self.agent)]

    def describe(self):
        return f"dictator:{self.agent}"


@dataclass(frozen=True)
class Oligarchy(Rule):
    coalition: frozenset

    def __post_init__(self):
        object.__setattr__(self, "coalition", frozenset(self.coalition))
        if not self.coalition:
            raise AggregationError("an oligarchy needs a non-empty coalition")

    def apply(self, p):
        bad = [i for i in self.coalition if not 1 <= i <= p.n]
        if bad:
            raise AggregationError(f"coalition members {sorted(bad)} outside 1..{p.n}")
        return [intersection_instance(p.agent(i) for i in sorted(self.coalition))]

    def describe(self):
        return "oligarchy:" + ",".join(map(str, sorted(self.coalition)))


def refines(finer, coarser) -> bool:
    """``finer`` agrees with ``coarser`` wherever ``coarser`` is not NULL."""
    return all(a == b or b is NULL for a, b in zip(finer, coarser))


def merge_rows(relations: list, cap: int = DEFAULT_SELECTION_CAP) -> frozenset:
    """Merge with incomplete information on one relation per agent."""
    count = 1
    for r in relations:
        count *= len(r)
    if count == 0:
        return frozenset()
    if count > cap:
        raise AggregationError(f"{count} tuple selections exceed the cap of {cap}")
    candidates = set()
    for selection in itertools.product(*relations):
        candidates.add(tuple(col[0] if all(v == col[0] for v in col) else NULL
                             for col in zip(*selection)))
    return frozenset(u for u in candidates
                     if not any(v != u and refines(v, u) for v in candidates))


def merge_relation(p: Profile, symbol: str, cap: int = DEFAULT_SELECTION_CAP) -> frozenset:
    return merge_rows([d[symbol] for d in p], cap)


@dataclass(frozen=True)
class MergeIncomplete(Rule):
    cap: int = DEFAULT_SELECTION_CAP

    def apply(self, p):
        return [Instance._trusted(
            p.schema, {n: merge_relation(p, n, self.cap) for n in p.schema.names})]

    def describe(self):
        return "merge"


@dataclass(frozen=True)
class PermutedDictatorship(Rule):
    """``F(D) = rho(D_agent)`` for a fixed value permutation ``rho``.

    ``rho`` is given as a tuple of ``(value, image)`` pairs; values it does not
    mention are fixed.
    """

    agent: int
    rho: tuple

    def mapping(self, values) -> dict:
        m = dict(self.rho)
        return {v: m.get(v, v) for v in values}

    def apply(self, p):
        from .core import active_domain

        d = p.agent(self.agent)
        return [permute(d, self.mapping(active_domain(d)))]

    def describe(self):
        pairs = ",".join(f"{a}>{b}" for a, b in self.rho)
        return f"permuted-dictator:{self.agent}:{pairs}"


@dataclass(frozen=True)
class FunctionRule(Rule):
    """Wrap an arbitrary ``profile -> instance(s)`` function as a rule."""

    name: str
    fn: Callable = field(compare=False)

    def apply(self, p):
        out = self.fn(p)
        return [out] if isinstance(out, Instance) else list(out)

    def describe(self):
        return self.name


def aggregate(rule: Rule, p: Profile) -> AggregationOutcome:
    if not isinstance(p, Profile):
        p = Profile(p)
    winners = list(rule.apply(p))
    for w in winners:
        if w.schema != p.schema:
            raise SchemaError("rule produced an instance over a different schema")
    return AggregationOutcome(tuple(winners))


# ------------------------------------------------------------ descriptors


def parse_rule(text: str) -> Rule:
    """Parse a CLI rule descriptor such as ``quota:2`` or ``oligarchy:1,3``."""
    text = text.strip()
    name, _, arg = text.partition(":")
    simple = {
        "union": Union, "intersection": Intersection, "majority": Majority,
        "distance": DistanceBased, "avg-voter": AverageVoter,
        "relwise-avg": RelationwiseAverageVoter, "merge": MergeIncomplete,
        "trivial-top": TrivialTop,
    }
    try:
        if name in simple and not arg:
            return simple[name]()
        if name == "quota" and arg:
            if "=" in arg:
                quotas = {}
                for part in arg.split(","):
                    sym, _, q = part.partition("=")
                    quotas[sym.strip()] = int(q)
                return Quota(QuotaSpec(quotas))
            return Quota(int(arg))
        if name == "dictator" and arg:
            return Dictatorship(int(arg))
        if name == "oligarchy" and arg:
            return Oligarchy(frozenset(int(x) for x in arg.split(",")))
    except ValueError as exc:
        raise ValueError(f"bad rule descriptor {text!r}: {exc}") from None
    raise ValueError(f"unknown rule descriptor {text!r}")
