"""Recursive-descent parser for formulas and queries.

Grammar, loosest to tightest::

    formula  := quant | implies
    quant    := ("forall" | "exists") var ("," var)* "." formula
    implies  := or ("->" formula)?              # right associative
    or       := and ("or" and)*
    and      := unary ("and" unary)*
    unary    := "not" unary | quant | primary
    primary  := "(" formula ")" | Rel "(" terms ")" | term ("=" | "!=") term
    query    := "ans" "(" vars? ")" ":-" formula

Quantifier bodies extend as far right as possible.  Lowercase identifiers are
variables unless declared as constants; quoted strings are constants; ``null``
is the null value.  Relation names are identifiers followed by ``(``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass

from ..core import NULL, Schema
from .syntax import (And, Atom, Const, Eq, Exists, Forall, Formula, Implies, Not, Or,
                     Query, Var, check_schema, rename_shadowed)


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int, text: str = ""):
        self.pos = pos
        self.text = text
        super().__init__(f"{message} at position {pos}")


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*"|'[^']*')
  | (?P<arrow>->)
  | (?P<turnstile>:-)
  | (?P<neq>!=)
  | (?P<sym>[(),.=])
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*|[0-9][A-Za-z0-9_]*)
""", re.VERBOSE)

_KEYWORDS = {"forall", "exists", "and", "or", "not", "null"}


def _tokenize(text: str) -> list[_Tok]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise FormulaSyntaxError(f"unexpected character {text[pos]!r}", pos, text)
        kind = m.lastgroup
        if kind != "ws":
            tok = m.group()
            if kind == "ident" and tok in _KEYWORDS:
                kind = tok
            elif kind in ("sym", "arrow", "turnstile", "neq"):
                kind = tok
            out.append(_Tok(kind, tok, pos))
        pos = m.end()
    out.append(_Tok("eof", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str, consts=(), schema: Schema | None = None):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0
        self.consts = set(consts)
        self.schema = schema

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def peek(self, k=1) -> _Tok:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise FormulaSyntaxError(f"{msg}, found {found!r}", tok.pos, self.text)

    def expect(self, kind) -> _Tok:
        if self.tok.kind != kind:
            self.error(f"expected {kind!r}")
        tok = self.tok
        self.i += 1
        return tok

    def accept(self, kind) -> bool:
        if self.tok.kind == kind:
            self.i += 1
            return True
        return False

    # formula := quant | implies
    def formula(self) -> Formula:
        if self.tok.kind in ("forall", "exists"):
            return self.quant()
        return self.implies()

    def quant(self) -> Formula:
        kind = self.tok.kind
        self.i += 1
        names = [self.var_name()]
        while self.accept(","):
            names.append(self.var_name())
        self.expect(".")
        body = self.formula()
        node = Forall if kind == "forall" else Exists
        for name in reversed(names):
            body = node(name, body)
        return body

    def var_name(self) -> str:
        tok = self.tok
        if tok.kind != "ident" or not (tok.text[0].islower() or tok.text[0] == "_"):
            self.error("expected a variable name")
        if tok.text in self.consts:
            self.error(f"{tok.text!r} is declared as a constant")
        self.i += 1
        return tok.text

    def implies(self) -> Formula:
        left = self.or_()
        if self.accept("->"):
            return Implies(left, self.formula())
        return left

    def or_(self) -> Formula:
        left = self.and_()
        while self.tok.kind == "or":
            self.i += 1
            left = Or(left, self.and_())
        return left

    def and_(self) -> Formula:
        left = self.unary()
        while self.tok.kind == "and":
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept("not"):
            return Not(self.unary())
        if self.tok.kind in ("forall", "exists"):
            return self.quant()
        return self.primary()

    def primary(self) -> Formula:
        tok = self.tok
        if tok.kind == "(":
            self.i += 1
            inner = self.formula()
            self.expect(")")
            return inner
        if tok.kind == "ident" and self.peek().kind == "(":
            return self.atom()
        left = self.term()
        if self.accept("="):
            return Eq(left, self.term())
        if self.accept("!="):
            return Not(Eq(left, self.term()))
        self.error("expected '=' or '!=' after term")

    def atom(self) -> Formula:
        name_tok = self.expect("ident")
        self.expect("(")
        args = []
        if self.tok.kind != ")":
            args.append(self.term())
            while self.accept(","):
                args.append(self.term())
        self.expect(")")
        if self.schema is not None:
            if name_tok.text not in self.schema:
                raise FormulaSyntaxError(
                    f"unknown relation symbol {name_tok.text!r}", name_tok.pos, self.text)
            arity = self.schema.arity(name_tok.text)
            if arity != len(args):
                raise FormulaSyntaxError(
                    f"{name_tok.text} has arity {arity}, got {len(args)} arguments",
                    name_tok.pos, self.text)
        return Atom(name_tok.text, tuple(args))

    def term(self):
        tok = self.tok
        if tok.kind == "null":
            self.i += 1
            return Const(NULL)
        if tok.kind == "string":
            self.i += 1
            if tok.text.startswith('"'):
                return Const(json.loads(tok.text))
            return Const(tok.text[1:-1])
        if tok.kind == "ident":
            self.i += 1
            if tok.text in self.consts:
                return Const(tok.text)
            if tok.text[0].islower() or tok.text[0] == "_":
                return Var(tok.text)
            raise FormulaSyntaxError(
                f"{tok.text!r} is neither a variable nor a declared constant", tok.pos, self.text)
        self.error("expected a term")

    def done(self):
        if self.tok.kind != "eof":
            self.error("unexpected trailing input")


def parse_formula(text: str, schema: Schema | None = None, consts=()) -> Formula:
    """Parse ``text`` into a formula; shadowed binders are alpha-renamed.

    When ``schema`` is given, atoms are checked against it.
    """
    p = _Parser(text, consts, schema)
    phi = p.formula()
    p.done()
    phi = rename_shadowed(phi)
    if schema is not None:
        check_schema(phi, schema)
    return phi


def parse_query(text: str, schema: Schema | None = None, consts=()) -> Query:
    """Parse ``ans(x1,...,xl) :- formula``."""
    p = _Parser(text, consts, schema)
    head_tok = p.tok
    if head_tok.kind != "ident" or head_tok.text != "ans":
        p.error("expected 'ans('")
    p.i += 1
    p.expect("(")
    head = []
    if p.tok.kind != ")":
        head.append(p.var_name())
        while p.accept(","):
            head.append(p.var_name())
    p.expect(")")
    p.expect(":-")
    body = p.formula()
    p.done()
    body = rename_shadowed(body)
    if schema is not None:
        check_schema(body, schema)
    try:
        return Query(tuple(head), body)
    except ValueError as exc:
        raise FormulaSyntaxError(str(exc), head_tok.pos, text) from None
