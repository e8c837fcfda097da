"""Syntactic fragments: positive existential, positive universal, (unions
of) conjunctive queries, and ground literals."""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (And, Atom, Const, Eq, Exists, Forall, Formula, Not, Or, desugar,
                     free_vars, resugar)


@dataclass(frozen=True)
class Fragments:
    pos_existential: bool
    pos_universal: bool
    conjunctive_query: bool
    lit_pos: bool
    lit_neg: bool
    sentence: bool


FRAGMENT_NAMES = {
    "exists-positive": "pos_existential",
    "forall-positive": "pos_universal",
    "cq": "conjunctive_query",
    "fo": None,
}


def _built_from(phi: Formula, allowed) -> bool:
    if isinstance(phi, (Eq, Atom)):
        return True
    if not isinstance(phi, allowed):
        return False
    if isinstance(phi, (And, Or)):
        return _built_from(phi.left, allowed) and _built_from(phi.right, allowed)
    return _built_from(phi.body, allowed)


def _atom_block(phi: Formula) -> bool:
    if isinstance(phi, Atom):
        return True
    return isinstance(phi, And) and _atom_block(phi.left) and _atom_block(phi.right)


def _cq(phi: Formula) -> bool:
    if _atom_block(phi):
        return True
    if isinstance(phi, Or):
        return _cq(phi.left) and _cq(phi.right)
    if isinstance(phi, Exists):
        return _cq(phi.body)
    return False


def _ground_atom(phi: Formula) -> bool:
    return isinstance(phi, Atom) and all(isinstance(a, Const) for a in phi.args)


def normal_form(phi: Formula) -> Formula:
    return resugar(desugar(phi))


def classify(phi: Formula) -> Fragments:
    nf = normal_form(phi)
    return Fragments(
        pos_existential=_built_from(nf, (Or, Exists)),
        pos_universal=_built_from(nf, (And, Forall)),
        conjunctive_query=_cq(nf),
        lit_pos=_ground_atom(nf),
        lit_neg=isinstance(nf, Not) and _ground_atom(nf.body),
        sentence=not free_vars(nf),
    )


def in_fragment(phi: Formula, fragment: str) -> bool:
    if fragment not in FRAGMENT_NAMES:
        raise ValueError(f"unknown fragment {fragment!r}; expected one of {sorted(FRAGMENT_NAMES)}")
    flag = FRAGMENT_NAMES[fragment]
    return True if flag is None else getattr(classify(phi), flag)
