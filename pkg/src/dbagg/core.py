"""Schemas, values, instances and profiles.

Values are opaque string tokens plus one distinguished null value (``NULL``,
printed as ``⊥``).  A tuple is a plain Python tuple of values.  Instances are
immutable and always stored in canonical form, so ``==`` is set equality per
relation symbol and instances can be used as dictionary keys.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from typing import Union


class SchemaError(ValueError):
    """Raised when an instance, tuple or symbol does not fit its schema."""


class _Null:
    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "⊥"

    __str__ = __repr__

    def __reduce__(self):
        return (_Null, ())


NULL = _Null()

Value = Union[str, _Null]
Row = tuple


def is_null(v) -> bool:
    return v is NULL


def value_key(v):
    """Sort key for values: constants lexicographically, null last."""
    if v is NULL:
        return (1, "")
    return (0, v)


def row_key(row: Row):
    return tuple(value_key(v) for v in row)


def check_value(v) -> Value:
    if v is NULL or isinstance(v, str):
        return v
    raise SchemaError(f"values must be strings or NULL, got {v!r}")


class Schema:
    """Relation symbols with their arities."""

    __slots__ = ("_symbols", "_names", "_hash")

    def __init__(self, symbols: Mapping[str, int]):
        if not symbols:
            raise SchemaError("a schema needs at least one relation symbol")
        for name, arity in symbols.items():
            if not isinstance(name, str) or not name:
                raise SchemaError(f"bad relation name {name!r}")
            if not isinstance(arity, int) or arity < 1:
                raise SchemaError(f"arity of {name} must be a positive integer")
        self._names = tuple(sorted(symbols))
        self._symbols = {name: symbols[name] for name in self._names}
        self._hash = hash(tuple(self._symbols.items()))

    @property
    def symbols(self) -> Mapping[str, int]:
        return self._symbols

    @property
    def names(self) -> tuple[str, ...]:
        return self._names

    def arity(self, symbol: str) -> int:
        try:
            return self._symbols[symbol]
        except KeyError:
            raise SchemaError(f"unknown relation symbol {symbol!r}") from None

    def __contains__(self, symbol) -> bool:
        return symbol in self._symbols

    def __iter__(self) -> Iterator[str]:
        return iter(self._names)

    def __len__(self) -> int:
        return len(self._names)

    def __eq__(self, other) -> bool:
        return isinstance(other, Schema) and self._symbols == other._symbols

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}/{a}" for n, a in self._symbols.items())
        return f"Schema({inner})"


class Instance:
    """A finite relational structure over a schema.

    ``relations`` maps every symbol of the schema to a frozenset of tuples.
    Symbols missing from the input mapping are empty.
    """

    __slots__ = ("schema", "_rels", "_hash", "_adom", "_key")

    def __init__(self, schema: Schema, relations: Mapping[str, Iterable[Row]] | None = None):
        relations = relations or {}
        for name in relations:
            if name not in schema:
                raise SchemaError(f"unknown relation symbol {name!r}")
        rels = {}
        for name in schema.names:
            arity = schema.arity(name)
            rows = set()
            for row in relations.get(name, ()):
                row = tuple(row)
                if len(row) != arity:
                    raise SchemaError(
                        f"tuple {row!r} has length {len(row)}, {name} has arity {arity}")
                for v in row:
                    check_value(v)
                rows.add(row)
            rels[name] = frozenset(rows)
        self.schema = schema
        self._rels = rels
        self._hash = None
        self._adom = None
        self._key = None

    @classmethod
    def _trusted(cls, schema: Schema, rels: dict) -> "Instance":
        # rels must hold a frozenset for every symbol, already validated
        self = object.__new__(cls)
        self.schema = schema
        self._rels = rels
        self._hash = None
        self._adom = None
        self._key = None
        return self

    @classmethod
    def empty(cls, schema: Schema) -> "Instance":
        return cls._trusted(schema, {n: frozenset() for n in schema.names})

    def __getitem__(self, symbol: str) -> frozenset:
        try:
            return self._rels[symbol]
        except KeyError:
            raise SchemaError(f"unknown relation symbol {symbol!r}") from None

    @property
    def relations(self) -> Mapping[str, frozenset]:
        return self._rels

    def rows(self, symbol: str) -> list[Row]:
        """Tuples of ``symbol`` in canonical order."""
        return sorted(self[symbol], key=row_key)

    def replace(self, **changes: Iterable[Row]) -> "Instance":
        rels = {n: list(r) for n, r in self._rels.items()}
        rels.update(changes)
        return Instance(self.schema, rels)

    def size(self) -> int:
        return sum(len(r) for r in self._rels.values())

    def is_empty(self) -> bool:
        return all(not r for r in self._rels.values())

    def sort_key(self):
        if self._key is None:
            self._key = tuple(tuple(row_key(r) for r in self.rows(n)) for n in self.schema.names)
        return self._key

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        if not isinstance(other, Instance):
            return NotImplemented
        return self.schema == other.schema and self._rels == other._rels

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.schema, tuple(self._rels.values())))
        return self._hash

    def __le__(self, other: "Instance") -> bool:
        """Pointwise relation inclusion."""
        return all(self._rels[n] <= other[n] for n in self.schema.names)

    def __repr__(self) -> str:
        parts = []
        for n in self.schema.names:
            body = ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.rows(n))
            parts.append(f"{n}={{{body}}}")
        return "Instance(" + "; ".join(parts) + ")"

    def to_dict(self) -> dict[str, list[list]]:
        return {n: [list(r) for r in self.rows(n)] for n in self.schema.names}


def canonicalize(schema_or_instance, relations=None) -> Instance:
    """Build the canonical instance for ``relations`` (duplicates dropped).

    Accepts either an existing :class:`Instance` or a schema together with a
    mapping from symbols to iterables of tuples.
    """
    if isinstance(schema_or_instance, Instance):
        return schema_or_instance
    return Instance(schema_or_instance, relations)


def active_domain(d: Instance) -> frozenset:
    if d._adom is None:
        d._adom = frozenset(v for rel in d._rels.values() for row in rel for v in row)
    return d._adom


class Profile(tuple):
    """An ordered tuple of ``n >= 1`` instances over one schema.

    Agents are numbered ``1..n``; ``profile.agent(i)`` is 1-based while plain
    indexing stays 0-based.
    """

    def __new__(cls, instances: Iterable[Instance]):
        instances = tuple(instances)
        if not instances:
            raise SchemaError("a profile needs at least one instance")
        schema = instances[0].schema
        for d in instances:
            if not isinstance(d, Instance):
                raise TypeError(f"profile members must be instances, got {type(d).__name__}")
            if d.schema != schema:
                raise SchemaError("all instances of a profile must share one schema")
        return super().__new__(cls, instances)

    @property
    def schema(self) -> Schema:
        return self[0].schema

    @property
    def n(self) -> int:
        return len(self)

    def agent(self, i: int) -> Instance:
        if not 1 <= i <= len(self):
            raise IndexError(f"agent index {i} outside 1..{len(self)}")
        return self[i - 1]

    def union(self, symbol: str) -> frozenset:
        return frozenset().union(*(d[symbol] for d in self))

    def intersection(self, symbol: str) -> frozenset:
        rels = [d[symbol] for d in self]
        return rels[0].intersection(*rels[1:])

    def permuted(self, order: Iterable[int]) -> "Profile":
        """Profile ``(D_{π(1)}, ..., D_{π(n)})`` for a 1-based agent order."""
        return Profile(self[i - 1] for i in order)

    def __repr__(self) -> str:
        return "Profile(" + ", ".join(map(repr, self)) + ")"


def _check_row(schema: Schema, symbol: str, row: Row) -> None:
    arity = schema.arity(symbol)
    if len(row) != arity:
        raise SchemaError(f"tuple {row!r} has length {len(row)}, {symbol} has arity {arity}")


def support(p: Profile, symbol: str, row: Row) -> frozenset[int]:
    """Agents (1-based) whose instance contains ``row`` in ``symbol``."""
    row = tuple(row)
    _check_row(p.schema, symbol, row)
    return frozenset(i for i, d in enumerate(p, 1) if row in d[symbol])


def union_instance(instances: Iterable[Instance]) -> Instance:
    instances = list(instances)
    schema = instances[0].schema
    return Instance._trusted(
        schema, {n: frozenset().union(*(d[n] for d in instances)) for n in schema.names})


def intersection_instance(instances: Iterable[Instance]) -> Instance:
    instances = list(instances)
    schema = instances[0].schema
    rels = {}
    for n in schema.names:
        first, *rest = [d[n] for d in instances]
        rels[n] = first.intersection(*rest)
    return Instance._trusted(schema, rels)


def permute(d: Instance, rho: Mapping) -> Instance:
    """Apply a value bijection to every tuple of ``d``; NULL is always fixed."""
    missing = [v for v in active_domain(d) if v is not NULL and v not in rho]
    if missing:
        raise SchemaError(f"permutation undefined on {sorted(missing, key=value_key)!r}")
    images = [rho[v] for v in rho if v is not NULL]
    if len(set(images)) != len(images):
        raise SchemaError("permutation is not injective")
    if NULL in rho and rho[NULL] is not NULL:
        raise SchemaError("permutations must fix NULL")

    def img(v):
        return NULL if v is NULL else rho[v]

    return Instance._trusted(
        d.schema,
        {n: frozenset(tuple(img(v) for v in row) for row in rel) for n, rel in d._rels.items()})


def symmetric_distance(d1: Instance, d2: Instance) -> int:
    if d1.schema != d2.schema:
        raise SchemaError("symmetric distance needs instances over the same schema")
    return sum(len(d1._rels[n] ^ d2._rels[n]) for n in d1.schema.names)
