"""Functional dependencies, value constraints and referential constraints.

Each constraint has a direct checker and a translation into a first-order
sentence; the two must agree on every instance.  Positions are 1-based.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .core import Instance, Schema, SchemaError
from .folang.syntax import Atom, Eq, Formula, Implies, Var, conj, exists, forall


@dataclass(frozen=True)
class FunctionalDependency:
    symbol: str
    key_positions: tuple
    dependent_positions: tuple

    def __post_init__(self):
        object.__setattr__(self, "key_positions", tuple(self.key_positions))
        object.__setattr__(self, "dependent_positions", tuple(self.dependent_positions))
        if not self.key_positions or not self.dependent_positions:
            raise SchemaError("a functional dependency needs key and dependent positions")
        if set(self.key_positions) & set(self.dependent_positions):
            raise SchemaError("key and dependent positions must be disjoint")

    @property
    def is_key(self) -> bool:
        return len(self.key_positions) == 1

    def validate(self, schema: Schema) -> None:
        arity = schema.arity(self.symbol)
        for p in self.key_positions + self.dependent_positions:
            if not 1 <= p <= arity:
                raise SchemaError(f"position {p} outside 1..{arity} for {self.symbol}")

    def __str__(self):
        keys = " ".join(map(str, self.key_positions))
        deps = " ".join(map(str, self.dependent_positions))
        return f"fd {self.symbol}: {keys} -> {deps}"


@dataclass(frozen=True)
class ValueConstraint:
    symbol: str
    position: int
    value_relation: str

    def validate(self, schema: Schema) -> None:
        arity = schema.arity(self.symbol)
        if not 1 <= self.position <= arity:
            raise SchemaError(f"position {self.position} outside 1..{arity} for {self.symbol}")
        if schema.arity(self.value_relation) != 1:
            raise SchemaError(f"value relation {self.value_relation} must be unary")

    def __str__(self):
        return f"value {self.symbol}[{self.position}] in {self.value_relation}"


@dataclass(frozen=True)
class ReferentialConstraint:
    """The last ``width`` columns of ``source`` must prefix-match ``target``."""

    source: str
    target: str
    width: int

    def validate(self, schema: Schema) -> None:
        if self.width < 1:
            raise SchemaError("referential width must be positive")
        if self.width > schema.arity(self.source) or self.width > schema.arity(self.target):
            raise SchemaError(f"width {self.width} exceeds the arity of {self.source} or {self.target}")

    def __str__(self):
        return f"ref {self.source} -> {self.target} on {self.width}"


Constraint = FunctionalDependency | ValueConstraint | ReferentialConstraint


def check_fd(d: Instance, c: FunctionalDependency) -> bool:
    c.validate(d.schema)
    seen = {}
    for row in d[c.symbol]:
        key = tuple(row[p - 1] for p in c.key_positions)
        dep = tuple(row[p - 1] for p in c.dependent_positions)
        if seen.setdefault(key, dep) != dep:
            return False
    return True


def check_value(d: Instance, c: ValueConstraint) -> bool:
    c.validate(d.schema)
    allowed = {row[0] for row in d[c.value_relation]}
    return all(row[c.position - 1] in allowed for row in d[c.symbol])


def check_ref(d: Instance, c: ReferentialConstraint) -> bool:
    c.validate(d.schema)
    k = c.width
    prefixes = {row[:k] for row in d[c.target]}
    return all(row[len(row) - k:] in prefixes for row in d[c.source])


def holds(d: Instance, c) -> bool:
    """Direct check for a structured constraint."""
    if isinstance(c, FunctionalDependency):
        return check_fd(d, c)
    if isinstance(c, ValueConstraint):
        return check_value(d, c)
    if isinstance(c, ReferentialConstraint):
        return check_ref(d, c)
    raise TypeError(f"not a constraint: {c!r}")


def _vars(prefix, q):
    return [f"{prefix}{i}" for i in range(1, q + 1)]


def to_formula(c, schema: Schema) -> Formula:
    """The first-order sentence expressing ``c`` (needs the schema for arities)."""
    c.validate(schema)
    if isinstance(c, FunctionalDependency):
        q = schema.arity(c.symbol)
        xs, ys = _vars("x", q), _vars("y", q)
        premise = [Atom(c.symbol, tuple(map(Var, xs))), Atom(c.symbol, tuple(map(Var, ys)))]
        premise += [Eq(Var(xs[i - 1]), Var(ys[i - 1])) for i in c.key_positions]
        conclusion = conj(Eq(Var(xs[i - 1]), Var(ys[i - 1])) for i in c.dependent_positions)
        return forall(xs + ys, Implies(conj(premise), conclusion))
    if isinstance(c, ValueConstraint):
        q = schema.arity(c.symbol)
        xs = _vars("x", q)
        return forall(xs, Implies(Atom(c.symbol, tuple(map(Var, xs))),
                                  Atom(c.value_relation, (Var(xs[c.position - 1]),))))
    if isinstance(c, ReferentialConstraint):
        q1, q2, k = schema.arity(c.source), schema.arity(c.target), c.width
        xs, ys = _vars("x", q1), _vars("y", q2)
        match = [Eq(Var(xs[q1 - k + j - 1]), Var(ys[j - 1])) for j in range(1, k + 1)]
        inner = exists(ys, conj([Atom(c.target, tuple(map(Var, ys)))] + match))
        return forall(xs, Implies(Atom(c.source, tuple(map(Var, xs))), inner))
    raise TypeError(f"not a constraint: {c!r}")


_FD_RE = re.compile(r"^fd\s+(\w+)\s*:\s*([\d\s]+?)\s*->\s*([\d\s]+)$")
_VALUE_RE = re.compile(r"^value\s+(\w+)\s*\[\s*(\d+)\s*\]\s+in\s+(\w+)$")
_REF_RE = re.compile(r"^ref\s+(\w+)\s*->\s*(\w+)\s+on\s+(\d+)$")


def parse_constraint(line: str):
    """Parse one line of the constraint DSL.

    >>> parse_constraint("fd P: 1 -> 2 3")
    FunctionalDependency(symbol='P', key_positions=(1,), dependent_positions=(2, 3))
    """
    text = line.strip()
    if m := _FD_RE.match(text):
        return FunctionalDependency(m[1], tuple(map(int, m[2].split())),
                                    tuple(map(int, m[3].split())))
    if m := _VALUE_RE.match(text):
        return ValueConstraint(m[1], int(m[2]), m[3])
    if m := _REF_RE.match(text):
        return ReferentialConstraint(m[1], m[2], int(m[3]))
    raise ValueError(f"cannot parse constraint {line!r}")


def parse_constraints(text: str) -> list:
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_constraint(line))
    return out
