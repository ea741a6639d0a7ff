"""Syntax tree for the logic query language."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple, Union


@dataclass(frozen=True)
class Variable:
    name: str  # without the $ sigil


@dataclass(frozen=True)
class Constant:
    text: str
    quoted: bool = False


Term = Union[Variable, Constant]


@dataclass(frozen=True)
class AssociationAtom:
    """A relation lookup with role-tagged members, e.g. ``T($A : r1, b : r2)``."""

    predicate: str
    members: Tuple[Tuple[Term, str], Tuple[Term, str]]
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class RuleAtom:
    """A positional call of a rule or built-in predicate."""

    predicate: str
    args: Tuple[Term, ...]
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class EqualityAtom:
    lhs: Term
    rhs: Term
    line: int = 0
    column: int = 0


@dataclass(frozen=True)
class Disjunction:
    """Braced alternative bodies; at least two branches."""

    branches: Tuple[Tuple["Goal", ...], ...]
    line: int = 0
    column: int = 0


Goal = Union[AssociationAtom, RuleAtom, EqualityAtom, Disjunction]


@dataclass(frozen=True)
class Rule:
    name: str
    params: Tuple[str, ...]
    body: Tuple[Goal, ...]
    line: int = 0
    column: int = 0


@dataclass
class Program:
    """A parsed query plus every rule in scope (prelude and user rules)."""

    rules: Dict[str, Rule]
    query: Tuple[Goal, ...]
    select: Tuple[str, ...]
    warnings: List[str] = field(default_factory=list)


def goal_variables(goals) -> List[str]:
    """Variable names in first-appearance order across nested goals."""
    seen: List[str] = []

    def visit_term(term: Term) -> None:
        if isinstance(term, Variable) and term.name not in seen:
            seen.append(term.name)

    def visit(goal) -> None:
        if isinstance(goal, AssociationAtom):
            for term, _role in goal.members:
                visit_term(term)
        elif isinstance(goal, RuleAtom):
            for term in goal.args:
                visit_term(term)
        elif isinstance(goal, EqualityAtom):
            visit_term(goal.lhs)
            visit_term(goal.rhs)
        else:
            for branch in goal.branches:
                for inner in branch:
                    visit(inner)

    for goal in goals:
        visit(goal)
    return seen
