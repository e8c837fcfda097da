"""Brute-force generators: instances, profiles and formulas.

Exhaustive streams come out in a fixed canonical order.  Sampled streams
use :class:`random.Random` (Mersenne Twister) seeded from ``SpaceSpec.seed``, so a
given seed always reproduces the same stream.
"""

from __future__ import annotations

import itertools
import math
import random
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field

from .core import Instance, Profile, Schema, row_key, value_key
from .folang.fragments import FRAGMENT_NAMES, in_fragment
from .folang.syntax import (And, Atom, Const, Eq, Exists, Forall, Formula, Implies, Not, Or,
                            Query, Var, free_vars, rename_shadowed)

DEFAULT_SPACE_CAP = 10 ** 6
RNG_ALGORITHM = "mt19937"


@dataclass(frozen=True)
class SpaceSpec:
    schema: Schema
    domain: tuple
    max_tuples: int
    agents: int = 2
    constraints: tuple = ()
    mode: str = "exhaustive"
    seed: int = 0
    count: int = 100
    cap: int = DEFAULT_SPACE_CAP
    rng: str = RNG_ALGORITHM

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(sorted(set(self.domain), key=value_key)))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if self.mode not in ("exhaustive", "sampled"):
            raise ValueError(f"unknown space mode {self.mode!r}")
        if self.rng != RNG_ALGORITHM:
            raise ValueError(f"unsupported generator {self.rng!r}; only {RNG_ALGORITHM} is available")
        if self.agents < 1 or self.max_tuples < 0:
            raise ValueError("agents must be positive and max_tuples non-negative")

    def rows(self, symbol: str) -> list:
        return list(itertools.product(self.domain, repeat=self.schema.arity(symbol)))

    def instance_count(self) -> int:
        """Unfiltered number of instances in exhaustive mode."""
        total = 1
        for name in self.schema.names:
            m = len(self.domain) ** self.schema.arity(name)
            total *= sum(math.comb(m, k) for k in range(min(m, self.max_tuples) + 1))
        return total

    def describe(self) -> str:
        sch = ",".join(f"{n}/{self.schema.arity(n)}" for n in self.schema.names)
        tail = "" if self.mode == "exhaustive" else f" seed={self.seed} count={self.count}"
        return (f"{self.mode} schema={{{sch}}} domain={{{','.join(map(str, self.domain))}}} "
                f"max_tuples={self.max_tuples} n={self.agents}{tail}")


def _accept(d: Instance, constraints) -> bool:
    if not constraints:
        return True
    from .constraints import holds
    from .folang import satisfies

    for c in constraints:
        ok = satisfies(d, {}, c) if isinstance(c, Formula) else holds(d, c)
        if not ok:
            return False
    return True


def _relation_choices(rows: list, k: int) -> list:
    rows = sorted(rows, key=row_key)
    return [frozenset(c) for size in range(min(k, len(rows)) + 1)
            for c in itertools.combinations(rows, size)]


def _exhaustive_instances(s: SpaceSpec) -> Iterator[Instance]:
    if s.instance_count() > s.cap:
        raise ValueError(f"space has {s.instance_count()} instances, cap is {s.cap}")
    names = s.schema.names
    choices = [_relation_choices(s.rows(n), s.max_tuples) for n in names]
    for combo in itertools.product(*choices):
        d = Instance._trusted(s.schema, dict(zip(names, combo)))
        if _accept(d, s.constraints):
            yield d


def _sample_instance(s: SpaceSpec, rnd: random.Random) -> Instance:
    rels = {}
    for name in s.schema.names:
        rows = s.rows(name)
        k = rnd.randint(0, min(s.max_tuples, len(rows)))
        rels[name] = frozenset(rnd.sample(rows, k))
    return Instance._trusted(s.schema, rels)


def _sampled_instances(s: SpaceSpec, rnd: random.Random, count: int) -> Iterator[Instance]:
    produced = tries = 0
    while produced < count:
        tries += 1
        if tries > 1000 * max(count, 1):
            raise ValueError("constraint filter rejects almost every sampled instance")
        d = _sample_instance(s, rnd)
        if _accept(d, s.constraints):
            produced += 1
            yield d


def enum_instances(s: SpaceSpec) -> Iterator[Instance]:
    if s.mode == "exhaustive":
        return _exhaustive_instances(s)
    return _sampled_instances(s, random.Random(s.seed), s.count)


def enum_profiles(s: SpaceSpec) -> Iterator[Profile]:
    if s.mode == "exhaustive":
        pool = list(_exhaustive_instances(s))
        if len(pool) ** s.agents > s.cap:
            raise ValueError(f"{len(pool)}^{s.agents} profiles exceed the cap of {s.cap}")
        return (Profile(ds) for ds in itertools.product(pool, repeat=s.agents))

    def sampled():
        rnd = random.Random(s.seed)
        for _ in range(s.count):
            yield Profile(list(_sampled_instances(s, rnd, s.agents)))

    return sampled()


# ------------------------------------------------------------- formulas

_CONNECTIVES = {
    "exists-positive": ("or", "exists"),
    "forall-positive": ("and", "forall"),
    "cq": ("and", "or", "exists"),
    "fo": ("not", "implies", "and", "or", "forall", "exists"),
}


@dataclass
class _Gen:
    schema: Schema
    fragment: str
    rnd: random.Random
    variables: tuple
    consts: tuple = ()
    names: tuple = field(init=False)

    def __post_init__(self):
        self.names = self.schema.names

    def term(self):
        if self.consts and self.rnd.random() < 0.2:
            return Const(self.rnd.choice(self.consts))
        return Var(self.rnd.choice(self.variables))

    def atom(self) -> Formula:
        name = self.rnd.choice(self.names)
        return Atom(name, tuple(self.term() for _ in range(self.schema.arity(name))))

    def base(self) -> Formula:
        if self.fragment != "cq" and self.rnd.random() < 0.25:
            return Eq(Var(self.rnd.choice(self.variables)), self.term())
        return self.atom()

    def block(self, budget: int) -> Formula:
        # conjunction of atoms only, as the conjunctive-query grammar requires
        if budget <= 1 or self.rnd.random() < 0.5:
            return self.atom()
        return And(self.block(budget - 1), self.block(budget - 1))

    def formula(self, budget: int) -> Formula:
        if budget <= 1 or self.rnd.random() < 0.3:
            return self.base()
        op = self.rnd.choice(_CONNECTIVES[self.fragment])
        if self.fragment == "cq" and op == "and":
            return self.block(budget)
        if op in ("exists", "forall"):
            node = Exists if op == "exists" else Forall
            return node(self.rnd.choice(self.variables), self.formula(budget - 1))
        if op == "not":
            return Not(self.formula(budget - 1))
        node = {"and": And, "or": Or, "implies": Implies}[op]
        return node(self.formula(budget - 1), self.formula(budget - 1))


def _close(phi: Formula, rnd: random.Random, fragment: str) -> Formula:
    if fragment == "forall-positive":
        quants = (Forall,)
    elif fragment in ("exists-positive", "cq"):
        quants = (Exists,)
    else:
        quants = (Forall, Exists)
    for v in sorted(free_vars(phi)):
        phi = rnd.choice(quants)(v, phi)
    return phi


def enum_formulas(schema: Schema, fragment: str, max_depth: int, seed: int, count: int,
                  kind: str = "query", variables=("x", "y", "z"), consts=(),
                  max_attempts: int | None = None) -> Iterator[Formula]:
    """Distinct random formulas of ``fragment`` with depth at most ``max_depth``.

    ``kind`` is ``"query"`` (at least one free variable), ``"sentence"``
    (free variables are closed off with quantifiers allowed by the
    fragment; the closing quantifiers may push a sentence past
    ``max_depth``) or ``"any"``.  Stops early if ``max_attempts`` draws do not
    yield ``count`` distinct formulas.
    """
    from .folang.syntax import depth

    if fragment not in FRAGMENT_NAMES:
        raise ValueError(f"unknown fragment {fragment!r}; expected one of {sorted(FRAGMENT_NAMES)}")
    if kind not in ("query", "sentence", "any"):
        raise ValueError(f"unknown formula kind {kind!r}")
    rnd = random.Random(seed)
    gen = _Gen(schema, fragment, rnd, tuple(variables), tuple(consts))
    seen = set()
    attempts = 0
    limit = max_attempts if max_attempts is not None else 200 * max(count, 1)
    while len(seen) < count and attempts < limit:
        attempts += 1
        budget = rnd.randint(1, max_depth)
        phi = gen.formula(budget)
        if kind == "sentence":
            phi = _close(phi, rnd, fragment)
        phi = rename_shadowed(phi)
        if kind == "query" and not free_vars(phi):
            continue
        if depth(phi) > max_depth and kind != "sentence":
            continue
        if phi in seen or not in_fragment(phi, fragment):
            continue
        seen.add(phi)
        yield phi


def enum_queries(schema: Schema, fragment: str, max_depth: int, seed: int, count: int,
                 **kw) -> Iterator[Query]:
    """Like :func:`enum_formulas` with ``kind="query"``; heads list free variables sorted."""
    for phi in enum_formulas(schema, fragment, max_depth, seed, count, kind="query", **kw):
        yield Query(tuple(sorted(free_vars(phi))), phi)


def instance_space(schema: Schema, domain: Iterable, max_tuples: int, **kw) -> list:
    return list(enum_instances(SpaceSpec(schema, tuple(domain), max_tuples, **kw)))
