"""First-order language over relational schemas."""

from .fragments import FRAGMENT_NAMES, Fragments, classify, in_fragment, normal_form
from .parser import FormulaSyntaxError, parse_formula, parse_query
from .semantics import (AnswerSet, UnboundVariableError, answer, answer_by_enumeration,
                        is_true, satisfies)
from .syntax import (And, Atom, Const, Eq, Exists, Forall, Formula, Implies, Neq, Not, Or,
                     Query, Var, conj, depth, desugar, disj, exists, forall, free_vars,
                     is_sentence, resugar, to_text)

__all__ = [
    "And", "AnswerSet", "Atom", "Const", "Eq", "Exists", "FRAGMENT_NAMES", "Forall",
    "Formula", "FormulaSyntaxError", "Fragments", "Implies", "Neq", "Not", "Or", "Query",
    "UnboundVariableError", "Var", "answer", "answer_by_enumeration", "classify", "conj",
    "depth", "desugar", "disj", "exists", "forall", "free_vars", "in_fragment", "is_sentence",
    "is_true", "normal_form", "parse_formula", "parse_query", "resugar", "satisfies", "to_text",
]
