"""Abstract syntax for first-order formulas over a relational schema.

The primitive connectives are equality, atoms, negation, implication and
universal quantification.  ``And``, ``Or`` and ``Exists`` are kept as
surface nodes so that formulas print the way they were written; ``desugar``
rewrites them into primitives and ``resugar`` recovers them.  Inequality is
simply ``Not(Eq(...))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from ..core import NULL, Schema, SchemaError


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: object  # a core Value: str or NULL

    def __str__(self):
        if self.value is NULL:
            return "null"
        return json.dumps(self.value, ensure_ascii=False)


Term = Union[Var, Const]


class Formula:
    __slots__ = ()

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: Term
    right: Term


@dataclass(frozen=True)
class Atom(Formula):
    symbol: str
    args: tuple

    def __post_init__(self):
        if not isinstance(self.args, tuple):
            object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


def Neq(left: Term, right: Term) -> Formula:
    return Not(Eq(left, right))


def conj(parts) -> Formula:
    """Left-nested conjunction of a non-empty sequence."""
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = And(out, p)
    return out


def disj(parts) -> Formula:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = Or(out, p)
    return out


def forall(names, body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Forall(name, body)
    return body


def exists(names, body: Formula) -> Formula:
    for name in reversed(list(names)):
        body = Exists(name, body)
    return body


@dataclass(frozen=True)
class Query:
    """An answer head (ordered, distinct variables) over a formula body."""

    head: tuple
    body: Formula

    def __post_init__(self):
        head = tuple(self.head)
        object.__setattr__(self, "head", head)
        if len(set(head)) != len(head):
            raise ValueError(f"query head has repeated variables: {head}")
        fv = free_vars(self.body)
        if set(head) != fv:
            raise ValueError(
                f"query head {list(head)} does not match free variables {sorted(fv)}")

    @property
    def width(self) -> int:
        return len(self.head)

    def __str__(self):
        return f"ans({','.join(self.head)}) :- {to_text(self.body)}"


def term_vars(t: Term) -> set:
    return {t.name} if isinstance(t, Var) else set()


def free_vars(phi: Formula) -> frozenset:
    if isinstance(phi, Eq):
        return frozenset(term_vars(phi.left) | term_vars(phi.right))
    if isinstance(phi, Atom):
        return frozenset(a.name for a in phi.args if isinstance(a, Var))
    if isinstance(phi, Not):
        return free_vars(phi.body)
    if isinstance(phi, (Implies, And, Or)):
        return free_vars(phi.left) | free_vars(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_vars(phi.body) - {phi.var}
    raise TypeError(f"not a formula: {phi!r}")


def all_vars(phi: Formula) -> set:
    if isinstance(phi, (Eq, Atom)):
        return set(free_vars(phi))
    if isinstance(phi, Not):
        return all_vars(phi.body)
    if isinstance(phi, (Implies, And, Or)):
        return all_vars(phi.left) | all_vars(phi.right)
    return all_vars(phi.body) | {phi.var}


def constants(phi: Formula) -> set:
    if isinstance(phi, Eq):
        return {t.value for t in (phi.left, phi.right) if isinstance(t, Const)}
    if isinstance(phi, Atom):
        return {t.value for t in phi.args if isinstance(t, Const)}
    if isinstance(phi, Not):
        return constants(phi.body)
    if isinstance(phi, (Implies, And, Or)):
        return constants(phi.left) | constants(phi.right)
    return constants(phi.body)


def is_sentence(phi: Formula) -> bool:
    return not free_vars(phi)


def depth(phi: Formula) -> int:
    """Atoms and equalities have depth 1; each connective or quantifier adds 1."""
    if isinstance(phi, (Eq, Atom)):
        return 1
    if isinstance(phi, Not):
        return 1 + depth(phi.body)
    if isinstance(phi, (Implies, And, Or)):
        return 1 + max(depth(phi.left), depth(phi.right))
    return 1 + depth(phi.body)


def check_schema(phi: Formula, schema: Schema) -> None:
    """Raise SchemaError if an atom names an unknown symbol or has the wrong arity."""
    if isinstance(phi, Atom):
        arity = schema.arity(phi.symbol)
        if len(phi.args) != arity:
            raise SchemaError(
                f"atom {phi.symbol} has {len(phi.args)} arguments, arity is {arity}")
    elif isinstance(phi, Not):
        check_schema(phi.body, schema)
    elif isinstance(phi, (Implies, And, Or)):
        check_schema(phi.left, schema)
        check_schema(phi.right, schema)
    elif isinstance(phi, (Forall, Exists)):
        check_schema(phi.body, schema)


def desugar(phi: Formula) -> Formula:
    """Rewrite And/Or/Exists into negation, implication and Forall."""
    if isinstance(phi, (Eq, Atom)):
        return phi
    if isinstance(phi, Not):
        return Not(desugar(phi.body))
    if isinstance(phi, Implies):
        return Implies(desugar(phi.left), desugar(phi.right))
    if isinstance(phi, Forall):
        return Forall(phi.var, desugar(phi.body))
    if isinstance(phi, And):
        return Not(Implies(desugar(phi.left), Not(desugar(phi.right))))
    if isinstance(phi, Or):
        return Implies(Not(desugar(phi.left)), desugar(phi.right))
    if isinstance(phi, Exists):
        return Not(Forall(phi.var, Not(desugar(phi.body))))
    raise TypeError(f"not a formula: {phi!r}")


def resugar(phi: Formula) -> Formula:
    """Recognise the desugared shapes of And/Or/Exists, top-down."""
    if isinstance(phi, (Eq, Atom)):
        return phi
    if isinstance(phi, Not):
        inner = phi.body
        if isinstance(inner, Implies) and isinstance(inner.right, Not):
            return And(resugar(inner.left), resugar(inner.right.body))
        if isinstance(inner, Forall) and isinstance(inner.body, Not):
            return Exists(inner.var, resugar(inner.body.body))
        return Not(resugar(inner))
    if isinstance(phi, Implies):
        if isinstance(phi.left, Not):
            return Or(resugar(phi.left.body), resugar(phi.right))
        return Implies(resugar(phi.left), resugar(phi.right))
    if isinstance(phi, Forall):
        return Forall(phi.var, resugar(phi.body))
    if isinstance(phi, (And, Or)):
        return type(phi)(resugar(phi.left), resugar(phi.right))
    if isinstance(phi, Exists):
        return Exists(phi.var, resugar(phi.body))
    raise TypeError(f"not a formula: {phi!r}")


def substitute(phi: Formula, old: str, new: str) -> Formula:
    """Rename free occurrences of variable ``old`` to ``new``."""
    def term(t):
        return Var(new) if isinstance(t, Var) and t.name == old else t

    if isinstance(phi, Eq):
        return Eq(term(phi.left), term(phi.right))
    if isinstance(phi, Atom):
        return Atom(phi.symbol, tuple(term(t) for t in phi.args))
    if isinstance(phi, Not):
        return Not(substitute(phi.body, old, new))
    if isinstance(phi, (Implies, And, Or)):
        return type(phi)(substitute(phi.left, old, new), substitute(phi.right, old, new))
    if phi.var == old:
        return phi
    return type(phi)(phi.var, substitute(phi.body, old, new))


def fresh_name(base: str, taken) -> str:
    stem = base.rstrip("0123456789_") or "v"
    i = 1
    while f"{stem}_{i}" in taken:
        i += 1
    return f"{stem}_{i}"


def rename_shadowed(phi: Formula) -> Formula:
    """Alpha-rename binders that reuse a name already in scope or free."""
    taken = set(all_vars(phi))

    def go(f, scope):
        if isinstance(f, (Eq, Atom)):
            return f
        if isinstance(f, Not):
            return Not(go(f.body, scope))
        if isinstance(f, (Implies, And, Or)):
            return type(f)(go(f.left, scope), go(f.right, scope))
        var, body = f.var, f.body
        if var in scope:
            new = fresh_name(var, taken)
            taken.add(new)
            body = substitute(body, var, new)
            var = new
        return type(f)(var, go(body, scope | {var}))

    return go(phi, frozenset(free_vars(phi)))


# ---------------------------------------------------------------- printing

_PREC = {Implies: 1, Or: 2, And: 3}


def _term_text(t: Term) -> str:
    return str(t)


def to_text(phi: Formula) -> str:
    """Concrete syntax accepted by :func:`dbagg.folang.parse_formula`."""
    if isinstance(phi, Eq):
        return f"{_term_text(phi.left)} = {_term_text(phi.right)}"
    if isinstance(phi, Atom):
        return f"{phi.symbol}({','.join(map(_term_text, phi.args))})"
    if isinstance(phi, Not):
        if isinstance(phi.body, Eq):
            return f"{_term_text(phi.body.left)} != {_term_text(phi.body.right)}"
        return f"not {_wrap(phi.body)}"
    if isinstance(phi, (Forall, Exists)):
        word = "forall" if isinstance(phi, Forall) else "exists"
        names = [phi.var]
        body = phi.body
        while type(body) is type(phi):
            names.append(body.var)
            body = body.body
        return f"{word} {','.join(names)}. {to_text(body)}"
    op = {Implies: "->", Or: "or", And: "and"}[type(phi)]
    return f"{_wrap(phi.left)} {op} {_wrap(phi.right)}"


def _wrap(phi: Formula) -> str:
    if isinstance(phi, (Eq, Atom)):
        return to_text(phi)
    if isinstance(phi, Not) and isinstance(phi.body, (Atom, Not)):
        return to_text(phi)
    return f"({to_text(phi)})"
