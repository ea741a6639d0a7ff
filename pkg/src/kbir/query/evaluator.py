"""Top-down query evaluation with tabling.

Rule calls are memoized by (rule name, bound-argument pattern).  A call whose
body read only finished tables is done after a single pass; one that read a
partial table (its own, through recursion, or an ancestor's) re-runs its body
until no table grows, and is marked finished together with the shallowest
call it depends on.  The finite entity domain guarantees termination and
completeness without any goal reordering.  Binding-pattern safety is only
checked at call time: the same rule may be legal under one call pattern and
illegal under another.
"""

from __future__ import annotations

import sys
import time
from typing import Dict, Iterator, List, Optional, Set, Tuple

from ..composition import RelationCategory
from ..errors import (
    AmbiguousError,
    ConstantNotFoundError,
    InvalidArgumentError,
    NotFoundError,
    TimeoutError_,
    UnboundEqualityError,
    UnboundVariableError,
    UnknownPredicateError,
    UnknownRoleError,
)
from ..model import KnowledgeBase, resolve_label
from .ast import (
    AssociationAtom,
    Constant,
    Disjunction,
    EqualityAtom,
    Program,
    RuleAtom,
    Term,
    Variable,
)

Binding = Dict[str, str]

# Association predicates available in every knowledge base.  They aggregate
# all instances of a category, whatever the declaring type is called.
_BUILTIN_ASSOCIATIONS = {
    "HierarchicalRelation": (
        RelationCategory.GENERIC_HIERARCHY,
        "broaderTermMember",
        "narrowerTermMember",
    ),
    "PartitiveRelation": (
        RelationCategory.WHOLE_PART_HIERARCHY,
        "wholeMember",
        "partMember",
    ),
}

_PREFIX_BUILTIN = "value-starts-with"

_DEADLINE_CHECK_EVERY = 2048


class _Table:
    __slots__ = ("answers", "complete")

    def __init__(self):
        self.answers: Set[Tuple[str, ...]] = set()
        self.complete = False


class _Evaluation:
    def __init__(self, kb: KnowledgeBase, program: Program, deadline: Optional[float]):
        self.kb = kb
        self.rules = program.rules
        self.deadline = deadline
        self.tables: Dict[tuple, _Table] = {}
        self.active: Dict[tuple, int] = {}  # call key -> stack depth
        self.deferred: List[tuple] = []
        self.dep_low = sys.maxsize  # shallowest active call read by the current one
        self.pass_dirty = False  # current body pass read a possibly-partial table
        self.answer_count = 0
        self.constants: Dict[str, str] = {}
        self.goal_info: Dict[int, tuple] = {}  # id(goal) -> validated static info
        self.ticks = _DEADLINE_CHECK_EVERY

    # -- helpers -----------------------------------------------------------

    def tick(self) -> None:
        self.ticks -= 1
        if self.ticks <= 0:
            self.ticks = _DEADLINE_CHECK_EVERY
            if self.deadline is not None and time.monotonic() > self.deadline:
                raise TimeoutError_("query evaluation exceeded its time budget")

    def resolve_constant(self, constant: Constant, line: int, column: int) -> str:
        cached = self.constants.get(constant.text)
        if cached is not None:
            return cached
        try:
            entity_id = resolve_label(self.kb, constant.text)
        except NotFoundError:
            raise ConstantNotFoundError(
                f"constant {constant.text!r} does not match any entity",
                line=line,
                column=column,
            ) from None
        except AmbiguousError as exc:
            raise AmbiguousError(exc.message, line=line, column=column) from None
        self.constants[constant.text] = entity_id
        return entity_id

    def value_of(self, term: Term, binding: Binding, line: int, column: int) -> Optional[str]:
        """Ground value of a term, or None for an unbound variable."""
        if isinstance(term, Variable):
            return binding.get(term.name)
        return self.resolve_constant(term, line, column)

    # -- goal resolution ---------------------------------------------------

    def solve(self, goals: tuple, binding: Binding) -> Iterator[Binding]:
        if not goals:
            yield binding
            return
        head = goals[0]
        rest = goals[1:]
        kind = type(head)
        if kind is RuleAtom:
            produced = self.solve_call(head, binding)
        elif kind is EqualityAtom:
            produced = self.solve_equality(head, binding)
        elif kind is AssociationAtom:
            produced = self.solve_association(head, binding)
        elif kind is Disjunction:
            produced = (
                extended
                for branch in head.branches
                for extended in self.solve(branch, binding)
            )
        else:  # pragma: no cover - parser emits no other goal kinds
            raise AssertionError(f"unexpected goal: {head!r}")
        if rest:
            for extended in produced:
                yield from self.solve(rest, extended)
        else:
            yield from produced


    def solve_equality(self, goal: EqualityAtom, binding: Binding) -> Iterator[Binding]:
        lhs = self.value_of(goal.lhs, binding, goal.line, goal.column)
        rhs = self.value_of(goal.rhs, binding, goal.line, goal.column)
        if lhs is None and rhs is None:
            raise UnboundEqualityError(
                "equality needs at least one bound side at this point",
                line=goal.line,
                column=goal.column,
            )
        if lhs is not None and rhs is not None:
            if lhs == rhs:
                yield binding
            return
        variable = goal.lhs if lhs is None else goal.rhs
        value = rhs if lhs is None else lhs
        assert isinstance(variable, Variable)
        extended = dict(binding)
        extended[variable.name] = value
        yield extended

    def association_info(self, goal: AssociationAtom) -> tuple:
        """Validated (category, indexed, source_term, target_term) for the atom."""
        info = self.goal_info.get(id(goal))
        if info is not None:
            return info
        name = goal.predicate
        builtin = _BUILTIN_ASSOCIATIONS.get(name)
        if builtin is not None:
            category, source_role, target_role = builtin
            indexed = None
        else:
            rel_type = self.kb.relation_types.get(name)
            if rel_type is None:
                raise UnknownPredicateError(
                    f"unknown predicate {name!r}", line=goal.line, column=goal.column
                )
            category = None
            source_role, target_role = rel_type.source_role, rel_type.target_role
            indexed = name

        roles = {role for _term, role in goal.members}
        expected = {source_role, target_role}
        if roles != expected:
            unknown = sorted(roles - expected)
            raise UnknownRoleError(
                f"predicate {name!r} has roles {source_role!r} and {target_role!r}; "
                f"got {', '.join(repr(r) for r in unknown)}",
                line=goal.line,
                column=goal.column,
            )
        by_role = {role: term for term, role in goal.members}
        info = (category, indexed, by_role[source_role], by_role[target_role])
        self.goal_info[id(goal)] = info
        return info

    def solve_association(self, goal: AssociationAtom, binding: Binding) -> Iterator[Binding]:
        category, indexed, source_term, target_term = self.association_info(goal)
        source_value = self.value_of(source_term, binding, goal.line, goal.column)
        target_value = self.value_of(target_term, binding, goal.line, goal.column)

        # Use the adjacency maps when one side is ground.
        if indexed is not None:
            if source_value is not None:
                pairs = tuple(
                    (source_value, t) for t in self.kb.targets_of(indexed, source_value)
                )
            elif target_value is not None:
                pairs = tuple(
                    (s, target_value) for s in self.kb.sources_of(indexed, target_value)
                )
            else:
                pairs = self.kb.instances_of(indexed)
        elif source_value is not None:
            pairs = tuple(
                (source_value, t)
                for t in self.kb.category_targets_of(category, source_value)
            )
        elif target_value is not None:
            pairs = tuple(
                (s, target_value)
                for s in self.kb.category_sources_of(category, target_value)
            )
        else:
            pairs = self.kb.category_pairs(category)

        for source, target in pairs:
            self.tick()
            if source_value is not None and source != source_value:
                continue
            if target_value is not None and target != target_value:
                continue
            extended = binding
            if source_value is None:
                extended = dict(extended)
                extended[source_term.name] = source
            if target_value is None:
                # The only possible prior binding is the source member when
                # both members use the same variable.
                current = extended.get(target_term.name)
                if current is not None and current != target:
                    continue
                if extended is binding:
                    extended = dict(extended)
                extended[target_term.name] = target
            yield extended

    def call_info(self, goal: RuleAtom, rule) -> tuple:
        """Variable argument positions of the atom, validated against the rule."""
        info = self.goal_info.get(id(goal))
        if info is None:
            if len(goal.args) != len(rule.params):
                raise UnknownPredicateError(
                    f"predicate {goal.predicate!r} takes {len(rule.params)} arguments, "
                    f"got {len(goal.args)}",
                    line=goal.line,
                    column=goal.column,
                )
            info = tuple(
                (position, term.name)
                for position, term in enumerate(goal.args)
                if type(term) is Variable
            )
            self.goal_info[id(goal)] = info
        return info

    def solve_call(self, goal: RuleAtom, binding: Binding) -> Iterator[Binding]:
        rule = self.rules.get(goal.predicate)
        if rule is None:
            if goal.predicate == _PREFIX_BUILTIN:
                yield from self.solve_prefix(goal, binding)
                return
            hint = ""
            if goal.predicate in self.kb.relation_types or goal.predicate in _BUILTIN_ASSOCIATIONS:
                hint = "; association lookups need ': role' tags on both members"
            raise UnknownPredicateError(
                f"unknown predicate {goal.predicate!r}{hint}",
                line=goal.line,
                column=goal.column,
            )
        var_positions = self.call_info(goal, rule)
        self.tick()
        arg_values = tuple(
            binding.get(term.name)
            if type(term) is Variable
            else self.resolve_constant(term, goal.line, goal.column)
            for term in goal.args
        )
        answers = self.call_rule(rule, arg_values)
        if not answers:
            return
        unbound = [
            (position, name)
            for position, name in var_positions
            if arg_values[position] is None
        ]
        # Positions ground at call time need no per-answer checks: the call
        # key pins them, so every table answer repeats them verbatim.
        if not unbound:
            for _answer in answers:
                yield binding
            return
        if len(unbound) == 1:
            position, name = unbound[0]
            for answer in answers:
                extended = dict(binding)
                extended[name] = answer[position]
                yield extended
            return
        for answer in answers:
            extended = dict(binding)
            ok = True
            for position, name in unbound:
                value = answer[position]
                current = extended.get(name)
                if current is None:
                    extended[name] = value
                elif current != value:
                    ok = False
                    break
            if ok:
                yield extended

    def call_rule(self, rule, arg_values: Tuple[Optional[str], ...]):
        key = (rule.name, arg_values)
        table = self.tables.get(key)
        if table is None:
            table = self.tables[key] = _Table()
        if table.complete:
            return table.answers
        depth = self.active.get(key)
        if depth is not None:
            # Recursive re-entry: hand back what is known so far; the
            # enclosing pass loop re-runs until nothing grows.
            self.dep_low = min(self.dep_low, depth)
            self.pass_dirty = True
            return list(table.answers)

        init: Binding = {}
        for param, value in zip(rule.params, arg_values):
            if value is None:
                continue
            if init.get(param, value) != value:
                # Repeated head parameter with conflicting bindings.
                table.complete = True
                return ()
            init[param] = value

        my_depth = len(self.active)
        self.active[key] = my_depth
        saved_low = self.dep_low
        saved_dirty = self.pass_dirty
        self.dep_low = sys.maxsize
        deferred_mark = len(self.deferred)
        answers = table.answers
        params = rule.params
        pair = params if len(params) == 2 else None
        try:
            while True:
                self.tick()
                before = self.answer_count
                self.pass_dirty = False
                for solution in self.solve(rule.body, init):
                    try:
                        if pair is not None:
                            answer_tuple = (solution[pair[0]], solution[pair[1]])
                        else:
                            answer_tuple = tuple(solution[param] for param in params)
                    except KeyError as missing:
                        raise UnboundVariableError(
                            f"parameter ${missing.args[0]} of rule {rule.name!r} is "
                            "not bound by the rule body under this call pattern",
                            line=rule.line,
                            column=rule.column,
                        ) from None
                    if answer_tuple not in answers:
                        answers.add(answer_tuple)
                        self.answer_count += 1
                if not self.pass_dirty:
                    break  # only finished tables were read; a re-run repeats itself
                if self.answer_count == before:
                    break  # nothing grew anywhere despite partial reads
        finally:
            del self.active[key]
            self.pass_dirty = saved_dirty
        if self.dep_low >= my_depth:
            # This call read no table of a still-active caller, so its loop
            # saturated everything reachable from it: the whole cluster of
            # calls deferred beneath it reached a true fixpoint with it.
            table.complete = True
            while len(self.deferred) > deferred_mark:
                self.tables[self.deferred.pop()].complete = True
            self.dep_low = saved_low
            return answers
        # Still entangled with an enclosing call; completion is decided by
        # the shallowest call this one read from, and the caller's pass must
        # re-run because these answers may still grow.
        self.deferred.append(key)
        self.dep_low = min(saved_low, self.dep_low)
        self.pass_dirty = True
        return list(answers)

    def solve_prefix(self, goal: RuleAtom, binding: Binding) -> Iterator[Binding]:
        if len(goal.args) != 2:
            raise UnknownPredicateError(
                f"{_PREFIX_BUILTIN} takes 2 arguments, got {len(goal.args)}",
                line=goal.line,
                column=goal.column,
            )
        subject, prefix_term = goal.args
        if not isinstance(prefix_term, Constant):
            raise InvalidArgumentError(
                f"the prefix argument of {_PREFIX_BUILTIN} must be a string constant",
                line=goal.line,
                column=goal.column,
            )
        prefix = prefix_term.text.casefold()

        def matches(entity) -> bool:
            if entity.preferred_label.casefold().startswith(prefix):
                return True
            return any(s.casefold().startswith(prefix) for s in entity.synonyms)

        value = self.value_of(subject, binding, goal.line, goal.column)
        if value is not None:
            if matches(self.kb.entities[value]):
                yield binding
            return
        assert isinstance(subject, Variable)
        for entity_id in sorted(self.kb.entities):
            self.tick()
            if matches(self.kb.entities[entity_id]):
                extended = dict(binding)
                extended[subject.name] = entity_id
                yield extended


def evaluate(
    kb: KnowledgeBase,
    program: Program,
    *,
    budget_seconds: Optional[float] = None,
) -> List[Binding]:
    """Run a program and return its distinct rows, deterministically ordered.

    Rows are dicts over the selected variables, sorted ascending by the
    case-folded preferred label of the first selected variable, then the
    following ones (entity ids break label ties).  ``budget_seconds`` bounds
    wall-clock evaluation time; exceeding it raises a ``Timeout`` error.
    """
    if sys.getrecursionlimit() < 20000:
        sys.setrecursionlimit(20000)
    deadline = time.monotonic() + budget_seconds if budget_seconds is not None else None
    evaluation = _Evaluation(kb, program, deadline)
    seen: Set[Tuple[str, ...]] = set()
    rows: List[Tuple[str, ...]] = []
    for solution in evaluation.solve(program.query, {}):
        values = []
        for name in program.select:
            value = solution.get(name)
            if value is None:
                raise UnboundVariableError(
                    f"variable ${name} is not bound in every solution"
                )
            values.append(value)
        row = tuple(values)
        if row not in seen:
            seen.add(row)
            rows.append(row)

    label = kb.label

    def sort_key(row: Tuple[str, ...]):
        return tuple((label(value).casefold(), value) for value in row)

    rows.sort(key=sort_key)
    return [dict(zip(program.select, row)) for row in rows]
