"""Logic query language: parsing, prelude rules, and tabled evaluation."""

from .ast import (
    AssociationAtom,
    Constant,
    Disjunction,
    EqualityAtom,
    Goal,
    Program,
    Rule,
    RuleAtom,
    Term,
    Variable,
)
from .evaluator import evaluate
from .parser import parse_program, parse_rules
from .prelude import prelude_rules, prelude_text

__all__ = [
    "AssociationAtom",
    "Constant",
    "Disjunction",
    "EqualityAtom",
    "Goal",
    "Program",
    "Rule",
    "RuleAtom",
    "Term",
    "Variable",
    "evaluate",
    "parse_program",
    "parse_rules",
    "prelude_rules",
    "prelude_text",
]
