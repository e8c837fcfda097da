"""Axiom checkers over finite spaces of profiles.

A verdict is always relative to the space that was scanned: ``pass`` means
no counterexample was found there.  Non-resolute rules are held to the
strict reading: every winner must satisfy a per-outcome axiom, anonymity and
permutation-neutrality compare whole winner sets, and independence and
monotonicity compare every winner of one profile against every winner of
another.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field

from .aggregators import Quota, QuotaSpec, Rule, aggregate
from .core import Instance, Profile, active_domain, permute, row_key, support

AXIOMS = ("U", "G", "A", "I", "N+", "N-", "NP", "M")


@dataclass(frozen=True)
class AxiomReport:
    axiom: str
    rule: str
    verdict: str  # "pass" or "counterexample"
    witness: dict | None = None
    profiles_checked: int = 0

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    @property
    def replay_space(self) -> list:
        """Profiles that reproduce the violation when checked on their own."""
        if self.witness is None:
            return []
        return list(self.witness.get("profiles") or [self.witness["profile"]])

    def __str__(self):
        tail = "" if self.passed else f" {_describe(self.witness)}"
        return f"{self.axiom} {self.rule}: {self.verdict}{tail}"


def _describe(w: dict) -> str:
    parts = []
    for key in ("symbol", "tuple", "other_tuple", "permutation", "agent_order"):
        if key in w:
            parts.append(f"{key}={w[key]!r}")
    return " ".join(parts)


class Outcomes:
    """Memoised winners of one rule."""

    def __init__(self, rule: Rule):
        self.rule = rule
        self._cache = {}

    def __call__(self, p: Profile) -> tuple:
        got = self._cache.get(p)
        if got is None:
            got = self._cache[p] = aggregate(self.rule, p).winners
        return got


def _profiles(space) -> list:
    return [p if isinstance(p, Profile) else Profile(p) for p in space]


def _candidates(p: Profile, symbol: str, universe) -> list:
    rows = set(p.union(symbol))
    if universe:
        rows.update(tuple(r) for r in universe.get(symbol, ()))
    return sorted(rows, key=row_key)


def _report(axiom, rule, space, witness=None):
    return AxiomReport(axiom, rule.describe(), "pass" if witness is None else "counterexample",
                       witness, len(space))


def check_unanimity(rule: Rule, space: Iterable) -> AxiomReport:
    space = _profiles(space)
    out = Outcomes(rule)
    for p in space:
        for w in out(p):
            for name in p.schema.names:
                missing = p.intersection(name) - w[name]
                if missing:
                    u = min(missing, key=row_key)
                    return _report("U", rule, space, dict(profile=p, winner=w, symbol=name, tuple=u))
    return _report("U", rule, space)


def check_groundedness(rule: Rule, space: Iterable) -> AxiomReport:
    space = _profiles(space)
    out = Outcomes(rule)
    for p in space:
        for w in out(p):
            for name in p.schema.names:
                extra = w[name] - p.union(name)
                if extra:
                    u = min(extra, key=row_key)
                    return _report("G", rule, space, dict(profile=p, winner=w, symbol=name, tuple=u))
    return _report("G", rule, space)


def check_anonymity(rule: Rule, space: Iterable) -> AxiomReport:
    space = _profiles(space)
    out = Outcomes(rule)
    for p in space:
        base = set(out(p))
        for order in itertools.permutations(range(1, p.n + 1)):
            q = p.permuted(order)
            if set(out(q)) != base:
                return _report("A", rule, space, dict(profile=p, agent_order=order, permuted=q))
    return _report("A", rule, space)


def check_independence(rule: Rule, space: Iterable, universe: Mapping | None = None) -> AxiomReport:
    """Exact check over all pairs, in one pass.

    Acceptance records are grouped by (symbol, tuple, support); a violation
    is a group holding an acceptance and a rejection from different profiles.
    """
    space = _profiles(space)
    out = Outcomes(rule)
    seen = {}
    for idx, p in enumerate(space):
        winners = out(p)
        for name in p.schema.names:
            for u in _candidates(p, name, universe):
                key = (name, u, support(p, name, u))
                rec = seen.setdefault(key, {True: [], False: []})
                for w in winners:
                    verdict = u in w[name]
                    other = [j for j in rec[not verdict] if j != idx]
                    if other:
                        q = space[other[0]]
                        return _report("I", rule, space, dict(
                            profiles=[q, p] if not verdict else [p, q], symbol=name, tuple=u,
                            support=sorted(key[2])))
                    if idx not in rec[verdict] and len(rec[verdict]) < 2:
                        rec[verdict].append(idx)
    return _report("I", rule, space)


def check_pos_neutrality(rule: Rule, space: Iterable, universe: Mapping | None = None) -> AxiomReport:
    space = _profiles(space)
    out = Outcomes(rule)
    for p in space:
        for name in p.schema.names:
            groups = {}
            for u in _candidates(p, name, universe):
                groups.setdefault(support(p, name, u), []).append(u)
            for w in out(p):
                for rows in groups.values():
                    acc = [u for u in rows if u in w[name]]
                    rej = [u for u in rows if u not in w[name]]
                    if acc and rej:
                        return _report("N+", rule, space, dict(
                            profile=p, winner=w, symbol=name, tuple=acc[0], other_tuple=rej[0]))
    return _report("N+", rule, space)


def check_neg_neutrality(rule: Rule, space: Iterable, universe: Mapping | None = None) -> AxiomReport:
    space = _profiles(space)
    out = Outcomes(rule)
    for p in space:
        everyone = frozenset(range(1, p.n + 1))
        for name in p.schema.names:
            groups = {}
            for u in _candidates(p, name, universe):
                groups.setdefault(support(p, name, u), []).append(u)
            for w in out(p):
                for s, rows in groups.items():
                    for u in rows:
                        for v in groups.get(everyone - s, ()):
                            if (u in w[name]) == (v in w[name]):
                                return _report("N-", rule, space, dict(
                                    profile=p, winner=w, symbol=name, tuple=u, other_tuple=v))
    return _report("N-", rule, space)


def _extend(rho: Mapping, values) -> dict:
    return {v: rho.get(v, v) for v in values}


def check_perm_neutrality(rule: Rule, space: Iterable, permutations: Iterable[Mapping]) -> AxiomReport:
    """``F(rho(D)) = rho(F(D))`` for each supplied permutation.

    A permutation is a mapping on values; values it does not mention stay
    fixed.  It must be a bijection on the values it touches.
    """
    space = _profiles(space)
    perms = [dict(r) for r in permutations]
    for rho in perms:
        if sorted(rho, key=repr) != sorted(rho.values(), key=repr):
            raise ValueError(f"{rho!r} is not a permutation of its support")
    out = Outcomes(rule)
    for p in space:
        for rho in perms:
            values = set().union(*(active_domain(d) for d in p))
            moved = Profile(permute(d, _extend(rho, active_domain(d))) for d in p)
            expected = {permute(w, _extend(rho, active_domain(w))) for w in out(p)}
            if set(out(moved)) != expected:
                return _report("NP", rule, space, dict(
                    profile=p, permutation=dict(sorted(_extend(rho, values).items(), key=repr))))
    return _report("NP", rule, space)


def _extends_with(p: Profile, q: Profile, name: str, u) -> bool:
    for d, e in zip(p, q):
        if d[name] != e[name] and not (u in e[name] and d[name] <= e[name]):
            return False
    return True


def check_monotonicity(rule: Rule, space: Iterable) -> AxiomReport:
    space = _profiles(space)
    out = Outcomes(rule)
    for p in space:
        for w in out(p):
            for name in p.schema.names:
                for u in sorted(w[name], key=row_key):
                    for q in space:
                        if q == p or q.n != p.n or not _extends_with(p, q, name, u):
                            continue
                        for w2 in out(q):
                            if u not in w2[name]:
                                return _report("M", rule, space, dict(
                                    profiles=[p, q], winner=w, symbol=name, tuple=u))
    return _report("M", rule, space)


def check_axiom(axiom: str, rule: Rule, space: Iterable, universe: Mapping | None = None,
                permutations: Iterable[Mapping] = ()) -> AxiomReport:
    if axiom == "U":
        return check_unanimity(rule, space)
    if axiom == "G":
        return check_groundedness(rule, space)
    if axiom == "A":
        return check_anonymity(rule, space)
    if axiom == "I":
        return check_independence(rule, space, universe)
    if axiom == "N+":
        return check_pos_neutrality(rule, space, universe)
    if axiom == "N-":
        return check_neg_neutrality(rule, space, universe)
    if axiom == "NP":
        return check_perm_neutrality(rule, space, permutations)
    if axiom == "M":
        return check_monotonicity(rule, space)
    raise ValueError(f"unknown axiom {axiom!r}; expected one of {', '.join(AXIOMS)}")


def axiom_matrix(rules: Iterable[Rule], space: Iterable, axioms=AXIOMS, universe=None,
                 permutations: Iterable[Mapping] = ()) -> dict:
    """``{(rule description, axiom): AxiomReport}`` for every combination."""
    space = _profiles(space)
    perms = list(permutations)
    return {(r.describe(), a): check_axiom(a, r, space, universe, perms)
            for r in rules for a in axioms}


@dataclass
class QuotaLemmaReport:
    """Quota rules satisfy A, I and M on the scanned space.

    Only this direction is checked; the converse quantifies over every
    possible aggregator and is not machine-checkable here.
    """

    reports: dict = field(default_factory=dict)
    note: str = "converse direction (A, I, M imply quota rule) is not checked"

    @property
    def holds(self) -> bool:
        return all(r.passed for r in self.reports.values())


def verify_quota_lemma(space: Iterable, quotas: Iterable) -> QuotaLemmaReport:
    """Check A, I and M for each quota (an int or a :class:`QuotaSpec`)."""
    space = _profiles(space)
    out = QuotaLemmaReport()
    for q in quotas:
        rule = Quota(q)
        label = rule.describe()
        for a in ("A", "I", "M"):
            out.reports[(label, a)] = check_axiom(a, rule, space)
    return out


__all__ = ["AXIOMS", "AxiomReport", "Outcomes", "QuotaLemmaReport", "axiom_matrix",
           "check_anonymity", "check_axiom", "check_groundedness", "check_independence",
           "check_monotonicity", "check_neg_neutrality", "check_perm_neutrality",
           "check_pos_neutrality", "check_unanimity", "verify_quota_lemma"]
