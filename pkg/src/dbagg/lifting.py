"""Collective rationality: does a rule carry a constraint from inputs to output?

All verdicts are relative to the scanned space of profiles.
"""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass, field

from .aggregators import DistanceBased, Quota, QuotaSpec, Rule
from .axioms import Outcomes, check_groundedness, check_unanimity
from .constraints import FunctionalDependency, ReferentialConstraint, ValueConstraint, holds
from .core import Profile
from .folang import Formula, classify, free_vars, satisfies


class Checker:
    """Memoised ``instance -> bool`` for a sentence or a structured constraint."""

    def __init__(self, constraint):
        if isinstance(constraint, Formula):
            if free_vars(constraint):
                raise ValueError(f"constraint has free variables: {sorted(free_vars(constraint))}")
            self._fn = lambda d: satisfies(d, {}, constraint)
        else:
            self._fn = lambda d: holds(d, constraint)
        self.constraint = constraint
        self._cache = {}

    def __call__(self, d) -> bool:
        got = self._cache.get(d)
        if got is None:
            got = self._cache[d] = self._fn(d)
        return got


@dataclass(frozen=True)
class LiftReport:
    rule: str
    constraint: str
    verdict: str  # "lifted-on-space" or "counterexample"
    profile: Profile | None = None
    winner: object = None
    profiles_checked: int = 0
    space_size: int = 0
    note: str = ""

    @property
    def lifted(self) -> bool:
        return self.verdict == "lifted-on-space"

    def __str__(self):
        return (f"{self.rule} / {self.constraint}: {self.verdict} "
                f"({self.profiles_checked} of {self.space_size} profiles qualified)")


def _profiles(space) -> list:
    return [p if isinstance(p, Profile) else Profile(p) for p in space]


def check_lifting(rule: Rule, constraint, space: Iterable, reading: str = "all",
                  outcomes: Outcomes | None = None) -> LiftReport:
    """Scan ``space`` for a profile of consistent inputs with an inconsistent winner.

    ``reading="all"`` demands that every winner satisfies the constraint;
    ``reading="some"`` is content with one.
    """
    if reading not in ("all", "some"):
        raise ValueError(f"unknown reading {reading!r}")
    ok = constraint if isinstance(constraint, Checker) else Checker(constraint)
    label = str(ok.constraint)
    space = _profiles(space)
    if isinstance(rule, DistanceBased) and ok.constraint in rule.constraints:
        return LiftReport(rule.describe(), label, "lifted-on-space", space_size=len(space),
                          note="candidates are filtered by this constraint")
    out = outcomes or Outcomes(rule)
    checked = 0
    for p in space:
        if not all(ok(d) for d in p):
            continue
        checked += 1
        winners = out(p)
        good = [ok(w) for w in winners]
        bad = not all(good) if reading == "all" else not any(good)
        if bad:
            w = next(w for w, g in zip(winners, good) if not g)
            return LiftReport(rule.describe(), label, "counterexample", p, w, checked, len(space))
    return LiftReport(rule.describe(), label, "lifted-on-space", None, None, checked, len(space))


@dataclass
class PredictionReport:
    """Lifting verdicts next to the predicted ones, one row per rule."""

    rows: list = field(default_factory=list)  # (label, predicted, LiftReport)

    @property
    def disagreements(self) -> list:
        return [(label, pred, rep) for label, pred, rep in self.rows if pred != rep.lifted]

    @property
    def agrees(self) -> bool:
        return not self.disagreements

    def __str__(self):
        lines = [f"{label}: predicted {'lifted' if pred else 'not lifted'}, "
                 f"found {rep.verdict}" for label, pred, rep in self.rows]
        return "\n".join(lines)


def verify_prop1(n: int, fd: FunctionalDependency, space: Iterable) -> PredictionReport:
    """Uniform quota ``q`` lifts ``fd`` exactly when ``q > n/2``."""
    space = _profiles(space)
    if any(p.n != n for p in space):
        raise ValueError(f"every profile must have {n} agents")
    ok = Checker(fd)
    report = PredictionReport()
    for q in range(1, n + 1):
        rep = check_lifting(Quota(q), ok, space)
        report.rows.append((f"quota:{q}", 2 * q > n, rep))
    return report


def shares_value_relation(p: Profile, vc: ValueConstraint) -> bool:
    first = p[0][vc.value_relation]
    return all(d[vc.value_relation] == first for d in p)


@dataclass(frozen=True)
class Prop2Report:
    rule: str
    grounded: bool
    lifting: LiftReport

    @property
    def consistent(self) -> bool:
        return not self.grounded or self.lifting.lifted


def verify_prop2(rule: Rule, vc: ValueConstraint, space: Iterable,
                 shared_value_relation: bool = True) -> Prop2Report:
    """A grounded rule lifts a value constraint.

    By default only profiles in which every agent holds the same value
    relation are considered; pass ``shared_value_relation=False`` to drop
    that premise.
    """
    space = _profiles(space)
    if shared_value_relation:
        space = [p for p in space if shares_value_relation(p, vc)]
    out = Outcomes(rule)
    g = check_groundedness(rule, space)
    lift = check_lifting(rule, vc, space, outcomes=out)
    return Prop2Report(rule.describe(), g.passed, lift)


def verify_prop3(n: int, rc: ReferentialConstraint, space: Iterable,
                 source_quota: int = 1) -> PredictionReport:
    """Quota rules lift ``rc`` exactly when the target symbol has quota 1.

    The source symbol keeps ``source_quota`` while the target quota sweeps 1..n.
    """
    space = _profiles(space)
    if any(p.n != n for p in space):
        raise ValueError(f"every profile must have {n} agents")
    ok = Checker(rc)
    report = PredictionReport()
    names = space[0].schema.names if space else (rc.source, rc.target)
    for q2 in range(1, n + 1):
        quotas = {name: source_quota for name in names}
        quotas[rc.target] = q2
        rule = Quota(QuotaSpec(quotas))
        rep = check_lifting(rule, ok, space)
        report.rows.append((f"{rc.source}={source_quota},{rc.target}={q2}", q2 == 1, rep))
    return report


@dataclass(frozen=True)
class LitReport:
    rule: str
    unanimous: bool
    grounded: bool
    reports: tuple

    @property
    def lifted(self) -> bool:
        return all(r.lifted for r in self.reports)

    @property
    def consistent(self) -> bool:
        """The theorem's forward direction: U and G together imply lifting."""
        return not (self.unanimous and self.grounded) or self.lifted


def check_lit_theorem(rule: Rule, literals: Iterable[Formula], space: Iterable) -> LitReport:
    literals = list(literals)
    for lit in literals:
        flags = classify(lit)
        if not (flags.lit_pos or flags.lit_neg):
            raise ValueError(f"{lit} is not a ground literal")
    space = _profiles(space)
    out = Outcomes(rule)
    u = check_unanimity(rule, space).passed
    g = check_groundedness(rule, space).passed
    reps = tuple(check_lifting(rule, lit, space, outcomes=out) for lit in literals)
    return LitReport(rule.describe(), u, g, reps)


@dataclass(frozen=True)
class DictatorshipReport:
    is_gd: bool
    choice: dict  # profile -> agent index, for the profiles scanned
    witness: Profile | None = None
    witness_winner: object = None

    def __bool__(self):
        return self.is_gd


def is_generalized_dictatorship(rule: Rule, space: Iterable) -> DictatorshipReport:
    """Does every winner coincide with some agent's own instance?"""
    out = Outcomes(rule)
    choice = {}
    for p in _profiles(space):
        for w in out(p):
            agents = [i for i, d in enumerate(p, start=1) if d == w]
            if not agents:
                return DictatorshipReport(False, choice, p, w)
            choice.setdefault(p, agents[0])
    return DictatorshipReport(True, choice)


def lifts_battery(rule: Rule, sentences: Iterable[Formula], space: Iterable) -> list:
    """Lift reports for every sentence; the rule's outcomes are computed once."""
    space = _profiles(space)
    out = Outcomes(rule)
    return [check_lifting(rule, phi, space, outcomes=out) for phi in sentences]
