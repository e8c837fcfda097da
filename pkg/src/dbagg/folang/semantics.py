"""Active-domain satisfaction and query answering.

``satisfies`` follows the recursive definition literally, one assignment at a
time.  ``answer`` is a separate set-at-a-time evaluator: every subformula is
turned into the relation of its satisfying assignments, using joins,
projections and complements.  The two are cross-checked in the test-suite.
"""

from __future__ import annotations

import itertools
from collections.abc import Iterable, Mapping
from dataclasses import dataclass

from ..core import NULL, Instance, active_domain, row_key, value_key
from .syntax import (And, Atom, Const, Eq, Exists, Forall, Formula, Implies, Not, Or,
                     Query, Var, constants, free_vars)


class UnboundVariableError(ValueError):
    pass


def _val(t, sigma):
    if isinstance(t, Const):
        return t.value
    try:
        return sigma[t.name]
    except KeyError:
        raise UnboundVariableError(f"variable {t.name!r} is not assigned") from None


def satisfies(d: Instance, sigma: Mapping, phi: Formula) -> bool:
    """``(d, sigma) |= phi`` with quantifiers ranging over ``adom(d)``."""
    return _sat(d, dict(sigma), phi, active_domain(d))


def _sat(d, sigma, phi, adom) -> bool:
    if isinstance(phi, Atom):
        return tuple(_val(t, sigma) for t in phi.args) in d[phi.symbol]
    if isinstance(phi, Eq):
        return _val(phi.left, sigma) == _val(phi.right, sigma)
    if isinstance(phi, Not):
        return not _sat(d, sigma, phi.body, adom)
    if isinstance(phi, Implies):
        return (not _sat(d, sigma, phi.left, adom)) or _sat(d, sigma, phi.right, adom)
    if isinstance(phi, And):
        return _sat(d, sigma, phi.left, adom) and _sat(d, sigma, phi.right, adom)
    if isinstance(phi, Or):
        return _sat(d, sigma, phi.left, adom) or _sat(d, sigma, phi.right, adom)
    if isinstance(phi, (Forall, Exists)):
        want_all = isinstance(phi, Forall)
        had = phi.var in sigma
        old = sigma.get(phi.var)
        result = want_all
        for u in adom:
            sigma[phi.var] = u
            if _sat(d, sigma, phi.body, adom) != want_all:
                result = not want_all
                break
        if had:
            sigma[phi.var] = old
        else:
            sigma.pop(phi.var, None)
        return result
    raise TypeError(f"not a formula: {phi!r}")


def fresh_value(avoid: Iterable) -> str:
    avoid = set(avoid)
    i = 0
    while f"#fresh{i}" in avoid:
        i += 1
    return f"#fresh{i}"


def is_true(d: Instance, phi: Formula) -> bool:
    """``d |= phi`` for every assignment.

    Free variables range over ``adom(d)``, the formula's constants, and one
    value outside both; values outside the active domain that are not
    mentioned by the formula are indistinguishable, so one witness suffices.
    """
    fv = sorted(free_vars(phi))
    if not fv:
        return satisfies(d, {}, phi)
    pool = set(active_domain(d)) | constants(phi)
    pool.add(fresh_value(pool))
    for values in itertools.product(sorted(pool, key=value_key), repeat=len(fv)):
        if not satisfies(d, dict(zip(fv, values)), phi):
            return False
    return True


@dataclass(frozen=True)
class AnswerSet:
    width: int
    tuples: frozenset

    def __post_init__(self):
        object.__setattr__(self, "tuples", frozenset(self.tuples))
        for t in self.tuples:
            if len(t) != self.width:
                raise ValueError(f"answer tuple {t!r} does not have width {self.width}")

    def rows(self) -> list:
        return sorted(self.tuples, key=row_key)

    def __iter__(self):
        return iter(self.rows())

    def __len__(self):
        return len(self.tuples)

    def __contains__(self, row):
        return tuple(row) in self.tuples

    def __le__(self, other: "AnswerSet") -> bool:
        return self.tuples <= other.tuples


# ---------------------------------------------------------------- algebra
#
# A relation is (vars, rows): vars is a sorted tuple of variable names, rows a
# set of value tuples aligned with vars.  ``doms`` maps each variable in scope
# to the set of values it ranges over.


def _extend(rel, target, doms):
    vars_, rows = rel
    if vars_ == target:
        return rows
    missing = [v for v in target if v not in vars_]
    pos = {v: i for i, v in enumerate(vars_)}
    out = set()
    pools = [sorted(doms[v], key=value_key) for v in missing]
    for row in rows:
        for extra in itertools.product(*pools):
            m = dict(zip(missing, extra))
            out.add(tuple(row[pos[v]] if v in pos else m[v] for v in target))
    return out


def _full(vars_, doms):
    return set(itertools.product(*(sorted(doms[v], key=value_key) for v in vars_)))


def _eval(d, phi, doms, adom):
    if isinstance(phi, Atom):
        vars_ = tuple(sorted({a.name for a in phi.args if isinstance(a, Var)}))
        rows = set()
        for row in d[phi.symbol]:
            m = {}
            ok = True
            for a, v in zip(phi.args, row):
                if isinstance(a, Const):
                    if a.value != v:
                        ok = False
                        break
                elif a.name in m:
                    if m[a.name] != v:
                        ok = False
                        break
                else:
                    if v not in doms[a.name]:
                        ok = False
                        break
                    m[a.name] = v
            if ok:
                rows.add(tuple(m[x] for x in vars_))
        return vars_, rows
    if isinstance(phi, Eq):
        l, r = phi.left, phi.right
        if isinstance(l, Const) and isinstance(r, Const):
            return (), ({()} if l.value == r.value else set())
        if isinstance(l, Const):
            l, r = r, l
        if isinstance(r, Const):
            return (l.name,), ({(r.value,)} if r.value in doms[l.name] else set())
        if l.name == r.name:
            return (l.name,), {(u,) for u in doms[l.name]}
        vars_ = tuple(sorted((l.name, r.name)))
        common = doms[l.name] & doms[r.name]
        return vars_, {(u, u) for u in common}
    if isinstance(phi, Not):
        vars_, rows = _eval(d, phi.body, doms, adom)
        return vars_, _full(vars_, doms) - rows
    if isinstance(phi, (And, Or, Implies)):
        left = _eval(d, phi.left, doms, adom)
        right = _eval(d, phi.right, doms, adom)
        vars_ = tuple(sorted(set(left[0]) | set(right[0])))
        if isinstance(phi, And):
            return vars_, _join(left, right, vars_)
        lrows = _extend(left, vars_, doms)
        rrows = _extend(right, vars_, doms)
        if isinstance(phi, Or):
            return vars_, lrows | rrows
        return vars_, (_full(vars_, doms) - lrows) | rrows
    if isinstance(phi, (Forall, Exists)):
        inner = dict(doms)
        inner[phi.var] = adom
        vars_, rows = _eval(d, phi.body, inner, adom)
        out_vars = tuple(v for v in vars_ if v != phi.var)
        if not adom:
            return out_vars, (_full(out_vars, doms) if isinstance(phi, Forall) else set())
        if phi.var not in vars_:
            return vars_, rows
        k = vars_.index(phi.var)
        if isinstance(phi, Exists):
            return out_vars, {r[:k] + r[k + 1:] for r in rows}
        counts = {}
        for r in rows:
            key = r[:k] + r[k + 1:]
            counts[key] = counts.get(key, 0) + 1
        need = len(adom)
        return out_vars, {key for key, c in counts.items() if c == need}
    raise TypeError(f"not a formula: {phi!r}")


def _join(left, right, vars_):
    lv, lrows = left
    rv, rrows = right
    shared = [v for v in lv if v in rv]
    li = [lv.index(v) for v in shared]
    ri = [rv.index(v) for v in shared]
    index = {}
    for r in rrows:
        index.setdefault(tuple(r[i] for i in ri), []).append(r)
    out = set()
    for l in lrows:
        for r in index.get(tuple(l[i] for i in li), ()):
            m = dict(zip(lv, l))
            m.update(zip(rv, r))
            out.add(tuple(m[v] for v in vars_))
    return out


def answer(d: Instance, q: Query, universe: Iterable | None = None) -> AnswerSet:
    """Answers of ``q`` on ``d``.

    Head variables range over ``universe`` (default: the active domain of
    ``d``); quantified variables always range over ``adom(d)``.
    """
    adom = active_domain(d)
    dom = adom if universe is None else frozenset(universe)
    doms = {v: dom for v in q.head}
    vars_, rows = _eval(d, q.body, doms, adom)
    if set(vars_) != set(q.head):
        raise ValueError("query head does not match the free variables of its body")
    pos = [vars_.index(v) for v in q.head]
    return AnswerSet(len(q.head), frozenset(tuple(r[i] for i in pos) for r in rows))


def answer_by_enumeration(d: Instance, q: Query, universe: Iterable | None = None) -> AnswerSet:
    """Reference evaluation: try every head assignment with :func:`satisfies`."""
    dom = active_domain(d) if universe is None else frozenset(universe)
    pool = sorted(dom, key=value_key)
    rows = set()
    for values in itertools.product(pool, repeat=len(q.head)):
        if satisfies(d, dict(zip(q.head, values)), q.body):
            rows.add(values)
    return AnswerSet(len(q.head), frozenset(rows))


__all__ = ["AnswerSet", "UnboundVariableError", "answer", "answer_by_enumeration",
           "fresh_value", "is_true", "satisfies", "NULL"]
