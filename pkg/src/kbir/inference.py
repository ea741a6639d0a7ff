"""Closure traversal and path admissibility over a knowledge base.

All traversals are computed on demand; nothing is materialized at build
time beyond the plain adjacency maps.  Visited sets guard every walk, so a
structurally broken graph still terminates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple, Union

from .composition import ORDERED, RelationCategory, TransitivityVerdict
from .errors import InvalidArgumentError
from .model import KnowledgeBase

FORWARD = "forward"
INVERSE = "inverse"


def descendants(
    kb: KnowledgeBase,
    entity_id: str,
    include_self: bool = False,
    max_depth: Optional[int] = None,
) -> Set[str]:
    """Entities below ``entity_id`` in the generic hierarchy.

    ``max_depth`` bounds the number of edges walked; ``None`` means the full
    closure.  The start entity is included only when ``include_self`` is set.
    """
    kb.entity(entity_id)
    children = kb.generic_children
    seen: Set[str] = set()
    seen_add = seen.add
    frontier = [entity_id]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        depth += 1
        next_frontier: List[str] = []
        push = next_frontier.append
        for node in frontier:
            for child in children.get(node, ()):
                if child not in seen and child != entity_id:
                    seen_add(child)
                    push(child)
        frontier = next_frontier
    if include_self:
        seen.add(entity_id)
    return seen


def ancestors(
    kb: KnowledgeBase,
    entity_id: str,
    include_self: bool = False,
    max_depth: Optional[int] = None,
) -> Set[str]:
    """Entities above ``entity_id``; a single chain under mono-hierarchy."""
    kb.entity(entity_id)
    parent = kb.generic_parent
    seen: Set[str] = set()
    node = entity_id
    depth = 0
    while max_depth is None or depth < max_depth:
        node = parent.get(node)
        if node is None or node in seen or node == entity_id:
            break
        seen.add(node)
        depth += 1
    if include_self:
        seen.add(entity_id)
    return seen


@dataclass(frozen=True)
class PathStep:
    category: RelationCategory
    direction: str = FORWARD

    def __post_init__(self):
        if self.direction not in (FORWARD, INVERSE):
            raise InvalidArgumentError(
                f"path step direction must be {FORWARD!r} or {INVERSE!r}, got {self.direction!r}"
            )


StepLike = Union[RelationCategory, Tuple[RelationCategory, str], PathStep]


@dataclass(frozen=True)
class PathSpec:
    """A sequence of traversal steps to judge for admissibility."""

    steps: Tuple[PathStep, ...]

    def __post_init__(self):
        if not self.steps:
            raise InvalidArgumentError("a path needs at least one step")
        for i, step in enumerate(self.steps):
            if step.category is RelationCategory.EQUIVALENCE and i > 0:
                raise InvalidArgumentError(
                    "an equivalence step may only open a path; synonyms never "
                    "extend one"
                )

    @classmethod
    def of(cls, steps: Sequence[StepLike]) -> "PathSpec":
        normalized: List[PathStep] = []
        for step in steps:
            if isinstance(step, PathStep):
                normalized.append(step)
            elif isinstance(step, RelationCategory):
                normalized.append(PathStep(step))
            else:
                category, direction = step
                normalized.append(PathStep(category, direction))
        return cls(tuple(normalized))


def check_path(kb: KnowledgeBase, spec: PathSpec) -> TransitivityVerdict:
    """Judge a traversal path by composing adjacent step pairs.

    A single step is always admissible.  ``NOT_APPLICABLE`` from any pair
    dominates, then ``NOT_EXPECTED``; only an all-transitive path passes.
    Ordered categories compose transitively only when both steps run in the
    same direction; mixing descent with ascent is not expected to carry over.
    """
    steps = spec.steps
    if len(steps) == 1:
        return TransitivityVerdict.TRANSITIVE
    saw_not_expected = False
    saw_not_applicable = False
    for left, right in zip(steps, steps[1:]):
        verdict = kb.compose(left.category, right.category)
        if (
            verdict is TransitivityVerdict.TRANSITIVE
            and left.direction != right.direction
            and left.category in ORDERED
            and right.category in ORDERED
        ):
            verdict = TransitivityVerdict.NOT_EXPECTED
        if verdict is TransitivityVerdict.NOT_APPLICABLE:
            saw_not_applicable = True
        elif verdict is TransitivityVerdict.NOT_EXPECTED:
            saw_not_expected = True
    if saw_not_applicable:
        return TransitivityVerdict.NOT_APPLICABLE
    if saw_not_expected:
        return TransitivityVerdict.NOT_EXPECTED
    return TransitivityVerdict.TRANSITIVE


def carriers_of(kb: KnowledgeBase, type_name: str, target: str) -> Set[str]:
    """Entities carrying a property, including generic descendants.

    An instance ``T(d -> target)`` attaches the property to ``d``; everything
    below ``d`` in the generic hierarchy inherits it.
    """
    kb.relation_type(type_name)
    kb.entity(target)
    carriers: Set[str] = set()
    for direct in kb.sources_of(type_name, target):
        carriers.add(direct)
        carriers |= descendants(kb, direct)
    return carriers


@dataclass(frozen=True)
class AttachedRelation:
    """A relation visible at an entity, possibly attached at an ancestor."""

    type: str
    direction: str  # FORWARD when the carrying entity is the source
    other: str
    origin: str  # the entity the instance is attached to

    def is_direct(self, entity_id: str) -> bool:
        return self.origin == entity_id


def inherited_relations(kb: KnowledgeBase, entity_id: str) -> Set[AttachedRelation]:
    """Typed relations of an entity plus those inherited from its ancestors.

    Properties propagate downward only: the union covers the entity itself
    and its generic ancestor chain.  Generic hierarchy edges themselves are
    not part of the result; they are the traversal, not the properties.
    """
    kb.entity(entity_id)
    generic = RelationCategory.GENERIC_HIERARCHY
    result: Set[AttachedRelation] = set()
    for origin in [entity_id, *sorted(ancestors(kb, entity_id))]:
        for inst in kb.instances_at(origin):
            if kb.relation_types[inst.type].category is generic:
                continue
            if inst.source == origin:
                result.add(AttachedRelation(inst.type, FORWARD, inst.target, origin))
            if inst.target == origin:
                result.add(AttachedRelation(inst.type, INVERSE, inst.source, origin))
    return result


def rt_neighborhood(
    kb: KnowledgeBase, entity_id: str, max_len: int
) -> Dict[int, Set[str]]:
    """Layered neighborhood over unspecific-association edges, undirected.

    Layer ``k`` holds entities first reached over exactly ``k`` edges; the
    start entity is excluded and layers are pairwise disjoint.  Every layer
    up to ``max_len`` is present, empty or not.
    """
    kb.entity(entity_id)
    if max_len < 1:
        raise InvalidArgumentError("max_len must be at least 1")
    adjacency = kb.rt_adjacency
    layers: Dict[int, Set[str]] = {}
    seen: Set[str] = {entity_id}
    frontier: List[str] = [entity_id]
    for distance in range(1, max_len + 1):
        reached: Set[str] = set()
        for node in frontier:
            for neighbor in adjacency.get(node, ()):
                if neighbor not in seen:
                    reached.add(neighbor)
        seen |= reached
        layers[distance] = reached
        frontier = sorted(reached)
    return layers
