"""Faceted entity store with typed relation instances.

A knowledge base is assembled once from plain input records and is immutable
afterwards.  ``build_kb`` enforces the same invariants that ``validate_inputs``
reports, so a successfully built knowledge base always validates cleanly.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .composition import (
    CompositionOverrides,
    RelationCategory,
    TransitivityVerdict,
    compose,
)
from .errors import (
    AmbiguousError,
    DanglingReferenceError,
    DuplicateIdError,
    DuplicateLabelError,
    HierarchyCycleError,
    InvalidIdError,
    InvalidRelationTypeError,
    KbirError,
    NotFoundError,
    PolyhierarchyViolationError,
    SynonymCollisionError,
    UnknownEntityError,
    UnknownRelationTypeError,
)

_ENTITY_ID_RE = re.compile(r"[a-z0-9_]+\Z")
_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_-]*\Z")


def normalize_label(label: str) -> str:
    """Case-fold, trim, and collapse internal whitespace to underscores."""
    return "_".join(label.casefold().split())


@dataclass(frozen=True)
class Facet:
    """A named top-level division; every entity lives in exactly one."""

    id: str
    label: str


@dataclass(frozen=True)
class Entity:
    id: str
    preferred_label: str
    facet: str
    synonyms: Tuple[str, ...] = ()


@dataclass(frozen=True)
class RelationType:
    """A named, directed relation with a semantic category and two roles."""

    name: str
    category: RelationCategory
    source_role: str
    target_role: str


@dataclass(frozen=True)
class RelationInstance:
    """One typed edge; ``source`` fills the type's source role."""

    type: str
    source: str
    target: str


@dataclass(frozen=True)
class Finding:
    code: str
    severity: str  # "error" | "warning" | "info"
    message: str
    locations: Tuple[str, ...] = ()


@dataclass
class ValidationReport:
    findings: List[Finding] = field(default_factory=list)

    def by_severity(self, severity: str) -> List[Finding]:
        return [f for f in self.findings if f.severity == severity]

    @property
    def errors(self) -> List[Finding]:
        return self.by_severity("error")

    @property
    def ok(self) -> bool:
        """True when no error findings are present."""
        return not self.errors

    def is_empty(self) -> bool:
        return not self.findings

    def __iter__(self):
        return iter(self.findings)


@dataclass
class KbInputs:
    """Raw material for ``build_kb``; produced by the ingest readers."""

    facets: List[Facet] = field(default_factory=list)
    entities: List[Entity] = field(default_factory=list)
    relation_types: List[RelationType] = field(default_factory=list)
    relation_instances: List[RelationInstance] = field(default_factory=list)
    composition_overrides: Dict[
        Tuple[RelationCategory, RelationCategory], TransitivityVerdict
    ] = field(default_factory=dict)

    def merge(self, other: "KbInputs") -> "KbInputs":
        """Concatenate two input sets, dropping records that repeat verbatim.

        Conflicting records (same id, different content) are kept so that
        validation can report the duplicate.
        """
        merged = KbInputs(
            facets=list(self.facets),
            entities=list(self.entities),
            relation_types=list(self.relation_types),
            relation_instances=list(self.relation_instances),
            composition_overrides=dict(self.composition_overrides),
        )
        seen_facets = set(merged.facets)
        seen_entities = set(merged.entities)
        seen_types = set(merged.relation_types)
        seen_instances = set(merged.relation_instances)
        for f in other.facets:
            if f not in seen_facets:
                merged.facets.append(f)
                seen_facets.add(f)
        for e in other.entities:
            if e not in seen_entities:
                merged.entities.append(e)
                seen_entities.add(e)
        for t in other.relation_types:
            if t not in seen_types:
                merged.relation_types.append(t)
                seen_types.add(t)
        for i in other.relation_instances:
            if i not in seen_instances:
                merged.relation_instances.append(i)
                seen_instances.add(i)
        merged.composition_overrides.update(other.composition_overrides)
        return merged

    def build(self) -> "KnowledgeBase":
        return build_kb(
            self.facets,
            self.entities,
            self.relation_types,
            self.relation_instances,
            composition_overrides=self.composition_overrides,
        )


class KnowledgeBase:
    """Immutable store of facets, entities, relation types and instances.

    Construct via :func:`build_kb`.  All lookup structures are precomputed at
    build time; nothing mutates afterwards, so instances may be shared freely
    between threads.
    """

    def __init__(
        self,
        facets: Dict[str, Facet],
        entities: Dict[str, Entity],
        relation_types: Dict[str, RelationType],
        relation_instances: Tuple[RelationInstance, ...],
        composition_overrides: Dict[
            Tuple[RelationCategory, RelationCategory], TransitivityVerdict
        ],
    ):
        self.facets = facets
        self.entities = entities
        self.relation_types = relation_types
        self.relation_instances = relation_instances
        self.composition_overrides = composition_overrides

        # label/synonym lookup: normalized string -> sorted entity ids
        lookup: Dict[str, set] = {}
        for e in entities.values():
            lookup.setdefault(e.id, set()).add(e.id)
            lookup.setdefault(normalize_label(e.preferred_label), set()).add(e.id)
            for s in e.synonyms:
                lookup.setdefault(normalize_label(s), set()).add(e.id)
        self._lookup: Dict[str, Tuple[str, ...]] = {
            k: tuple(sorted(v)) for k, v in lookup.items()
        }

        generic_children: Dict[str, List[str]] = {}
        generic_parent: Dict[str, str] = {}
        by_type_source: Dict[str, Dict[str, List[str]]] = {}
        by_type_target: Dict[str, Dict[str, List[str]]] = {}
        by_category: Dict[RelationCategory, List[Tuple[str, str]]] = {}
        by_cat_source: Dict[RelationCategory, Dict[str, List[str]]] = {}
        by_cat_target: Dict[RelationCategory, Dict[str, List[str]]] = {}
        by_endpoint: Dict[str, List[RelationInstance]] = {}
        rt_adjacency: Dict[str, set] = {}

        for inst in relation_instances:
            category = relation_types[inst.type].category
            by_type_source.setdefault(inst.type, {}).setdefault(inst.source, []).append(inst.target)
            by_type_target.setdefault(inst.type, {}).setdefault(inst.target, []).append(inst.source)
            by_category.setdefault(category, []).append((inst.source, inst.target))
            by_cat_source.setdefault(category, {}).setdefault(inst.source, []).append(inst.target)
            by_cat_target.setdefault(category, {}).setdefault(inst.target, []).append(inst.source)
            by_endpoint.setdefault(inst.source, []).append(inst)
            if inst.target != inst.source:
                by_endpoint.setdefault(inst.target, []).append(inst)
            if category is RelationCategory.GENERIC_HIERARCHY:
                generic_children.setdefault(inst.source, []).append(inst.target)
                generic_parent[inst.target] = inst.source
            if category is RelationCategory.UNSPECIFIC_ASSOCIATION:
                rt_adjacency.setdefault(inst.source, set()).add(inst.target)
                rt_adjacency.setdefault(inst.target, set()).add(inst.source)

        self.generic_children: Dict[str, Tuple[str, ...]] = {
            k: tuple(sorted(v)) for k, v in generic_children.items()
        }
        self.generic_parent = generic_parent
        self._by_type_source = {
            t: {s: tuple(v) for s, v in m.items()} for t, m in by_type_source.items()
        }
        self._by_type_target = {
            t: {s: tuple(v) for s, v in m.items()} for t, m in by_type_target.items()
        }
        self._by_category = {c: tuple(v) for c, v in by_category.items()}
        self._by_cat_source = {
            c: {s: tuple(v) for s, v in m.items()} for c, m in by_cat_source.items()
        }
        self._by_cat_target = {
            c: {t: tuple(v) for t, v in m.items()} for c, m in by_cat_target.items()
        }
        self._by_endpoint = {e: tuple(v) for e, v in by_endpoint.items()}
        self.rt_adjacency: Dict[str, Tuple[str, ...]] = {
            k: tuple(sorted(v)) for k, v in rt_adjacency.items()
        }

    # -- lookups ---------------------------------------------------------

    def entity(self, entity_id: str) -> Entity:
        ent = self.entities.get(entity_id)
        if ent is None:
            raise UnknownEntityError(f"unknown entity: {entity_id!r}")
        return ent

    def relation_type(self, name: str) -> RelationType:
        rt = self.relation_types.get(name)
        if rt is None:
            raise UnknownRelationTypeError(f"unknown relation type: {name!r}")
        return rt

    def label(self, entity_id: str) -> str:
        return self.entity(entity_id).preferred_label

    def instances_of(self, type_name: str) -> Tuple[Tuple[str, str], ...]:
        """All (source, target) pairs of the named relation type."""
        src = self._by_type_source.get(type_name, {})
        return tuple((s, t) for s, targets in src.items() for t in targets)

    def targets_of(self, type_name: str, source: str) -> Tuple[str, ...]:
        return self._by_type_source.get(type_name, {}).get(source, ())

    def sources_of(self, type_name: str, target: str) -> Tuple[str, ...]:
        return self._by_type_target.get(type_name, {}).get(target, ())

    def category_pairs(self, category: RelationCategory) -> Tuple[Tuple[str, str], ...]:
        """All (source, target) pairs across every type of the category."""
        return self._by_category.get(category, ())

    def category_targets_of(self, category: RelationCategory, source: str) -> Tuple[str, ...]:
        return self._by_cat_source.get(category, {}).get(source, ())

    def category_sources_of(self, category: RelationCategory, target: str) -> Tuple[str, ...]:
        return self._by_cat_target.get(category, {}).get(target, ())

    def instances_at(self, entity_id: str) -> Tuple[RelationInstance, ...]:
        """All instances having the entity as either endpoint."""
        return self._by_endpoint.get(entity_id, ())

    def compose(self, first: RelationCategory, second: RelationCategory) -> TransitivityVerdict:
        """Pairwise composition with this knowledge base's overrides applied."""
        return compose(first, second, self.composition_overrides)


def resolve_label(kb: KnowledgeBase, label: str) -> str:
    """Resolve an id, preferred label, or synonym to the entity id.

    Raises ``NotFoundError`` when nothing matches and ``AmbiguousError`` when
    the normalized form maps to more than one entity.
    """
    hits = kb._lookup.get(normalize_label(label))
    if not hits:
        raise NotFoundError(f"no entity matches label {label!r}")
    if len(hits) > 1:
        raise AmbiguousError(
            f"label {label!r} is ambiguous between: " + ", ".join(hits)
        )
    return hits[0]


def build_kb(
    facets: Sequence[Facet],
    entities: Sequence[Entity],
    relation_types: Sequence[RelationType],
    relation_instances: Sequence[RelationInstance],
    composition_overrides: Optional[CompositionOverrides] = None,
) -> KnowledgeBase:
    """Validate the inputs and assemble an immutable knowledge base.

    Fails atomically: the first error-severity finding is raised as the
    matching exception and nothing is constructed.
    """
    overrides = dict(composition_overrides or {})
    report = validate_inputs(
        facets, entities, relation_types, relation_instances, overrides
    )
    for finding in report.errors:
        raise _EXCEPTION_BY_CODE.get(finding.code, KbirError)(finding.message)
    return KnowledgeBase(
        facets={f.id: f for f in facets},
        entities={e.id: e for e in entities},
        relation_types={t.name: t for t in relation_types},
        relation_instances=tuple(relation_instances),
        composition_overrides=overrides,
    )


def validate_kb(kb: KnowledgeBase) -> ValidationReport:
    """Re-check every invariant of an assembled knowledge base."""
    return validate_inputs(
        list(kb.facets.values()),
        list(kb.entities.values()),
        list(kb.relation_types.values()),
        list(kb.relation_instances),
        kb.composition_overrides,
    )


_EXCEPTION_BY_CODE = {
    "DuplicateId": DuplicateIdError,
    "InvalidId": InvalidIdError,
    "DanglingReference": DanglingReferenceError,
    "PolyhierarchyViolation": PolyhierarchyViolationError,
    "HierarchyCycle": HierarchyCycleError,
    "DuplicateLabel": DuplicateLabelError,
    "SynonymCollision": SynonymCollisionError,
    "InvalidRelationType": InvalidRelationTypeError,
}


def validate_inputs(
    facets: Sequence[Facet],
    entities: Sequence[Entity],
    relation_types: Sequence[RelationType],
    relation_instances: Sequence[RelationInstance],
    composition_overrides: Optional[CompositionOverrides] = None,
) -> ValidationReport:
    """Collect all invariant violations over raw inputs.

    Unlike ``build_kb`` this never raises; it enumerates every finding so a
    broken interchange file can be reported in full.
    """
    findings: List[Finding] = []

    def err(code: str, message: str, *locations: str) -> None:
        findings.append(Finding(code, "error", message, tuple(locations)))

    facet_ids = set()
    for f in facets:
        if not f.id or not _TOKEN_RE.match(f.id):
            err("InvalidId", f"facet id {f.id!r} is not a valid token", f.id)
        if f.id in facet_ids:
            err("DuplicateId", f"duplicate facet id {f.id!r}", f.id)
        facet_ids.add(f.id)

    entity_ids = set()
    labels_per_facet: Dict[Tuple[str, str], str] = {}
    for e in entities:
        if not _ENTITY_ID_RE.match(e.id):
            err(
                "InvalidId",
                f"entity id {e.id!r} must be lowercase letters, digits, or underscore",
                e.id,
            )
        if e.id in entity_ids:
            err("DuplicateId", f"duplicate entity id {e.id!r}", e.id)
        entity_ids.add(e.id)
        if e.facet not in facet_ids:
            err(
                "DanglingReference",
                f"entity {e.id!r} references unknown facet {e.facet!r}",
                e.id,
            )
        key = (e.facet, e.preferred_label.casefold())
        other = labels_per_facet.get(key)
        if other is not None:
            err(
                "DuplicateLabel",
                f"label {e.preferred_label!r} used by both {other!r} and {e.id!r} in facet {e.facet!r}",
                other,
                e.id,
            )
        else:
            labels_per_facet[key] = e.id

    # Synonyms may never shadow an entity id: resolution must stay unambiguous.
    for e in entities:
        for s in e.synonyms:
            normalized = normalize_label(s)
            if normalized in entity_ids:
                err(
                    "SynonymCollision",
                    f"synonym {s!r} of {e.id!r} collides with entity id {normalized!r}",
                    e.id,
                )

    type_names = set()
    category_by_type: Dict[str, RelationCategory] = {}
    for t in relation_types:
        if not _TOKEN_RE.match(t.name):
            err("InvalidId", f"relation type name {t.name!r} is not a valid token", t.name)
        if t.name in type_names:
            err("DuplicateId", f"duplicate relation type name {t.name!r}", t.name)
        type_names.add(t.name)
        category_by_type[t.name] = t.category
        if t.category is RelationCategory.EQUIVALENCE:
            err(
                "InvalidRelationType",
                f"relation type {t.name!r} may not use the Equivalence category; "
                "synonymy is carried by entity synonym lists",
                t.name,
            )
        if t.source_role == t.target_role:
            err(
                "InvalidRelationType",
                f"relation type {t.name!r} uses the same token for both roles",
                t.name,
            )

    generic_parent: Dict[str, str] = {}
    edges_by_category: Dict[RelationCategory, List[Tuple[str, str]]] = {}
    for idx, inst in enumerate(relation_instances):
        where = f"relations[{idx}]"
        if inst.type not in category_by_type:
            err(
                "DanglingReference",
                f"instance references unknown relation type {inst.type!r}",
                where,
            )
            continue
        missing = [x for x in (inst.source, inst.target) if x not in entity_ids]
        if missing:
            err(
                "DanglingReference",
                f"instance of {inst.type!r} references unknown entities: "
                + ", ".join(repr(m) for m in missing),
                where,
            )
            continue
        category = category_by_type[inst.type]
        edges_by_category.setdefault(category, []).append((inst.source, inst.target))
        if category is RelationCategory.GENERIC_HIERARCHY:
            previous = generic_parent.get(inst.target)
            if previous is not None and previous != inst.source:
                err(
                    "PolyhierarchyViolation",
                    f"entity {inst.target!r} has generic parents {previous!r} and {inst.source!r}",
                    inst.target,
                )
            generic_parent[inst.target] = inst.source

    # The generic hierarchy plus the whole/part and chronological edge sets
    # must each be free of directed cycles.
    for category in (
        RelationCategory.GENERIC_HIERARCHY,
        RelationCategory.WHOLE_PART_HIERARCHY,
        RelationCategory.CHRONO_EARLIER_LATER,
        RelationCategory.CHRONO_LATER_EARLIER,
    ):
        edges = edges_by_category.get(category, [])
        cycle = _find_cycle(edges)
        if cycle:
            err(
                "HierarchyCycle",
                f"{category.value} instances contain a cycle: " + " -> ".join(cycle),
                *cycle,
            )

    if composition_overrides:
        for (first, second), verdict in sorted(
            composition_overrides.items(), key=lambda kv: (kv[0][0].value, kv[0][1].value)
        ):
            findings.append(
                Finding(
                    "CompositionOverride",
                    "info",
                    f"composition of ({first.value}, {second.value}) overridden to {verdict.value}",
                    (first.value, second.value),
                )
            )

    return ValidationReport(findings)


def _find_cycle(edges: Iterable[Tuple[str, str]]) -> List[str]:
    """Return one directed cycle as a node list, or [] when acyclic."""
    adjacency: Dict[str, List[str]] = {}
    for s, t in edges:
        adjacency.setdefault(s, []).append(t)
    WHITE, GRAY, BLACK = 0, 1, 2
    color: Dict[str, int] = {}
    for start in adjacency:
        if color.get(start, WHITE) != WHITE:
            continue
        # Iterative DFS; stack holds (node, iterator over its children).
        stack = [(start, iter(adjacency.get(start, ())))]
        color[start] = GRAY
        path = [start]
        while stack:
            node, children = stack[-1]
            advanced = False
            for child in children:
                state = color.get(child, WHITE)
                if state == GRAY:
                    return path[path.index(child):] + [child]
                if state == WHITE:
                    color[child] = GRAY
                    stack.append((child, iter(adjacency.get(child, ()))))
                    path.append(child)
                    advanced = True
                    break
            if not advanced:
                color[node] = BLACK
                stack.pop()
                path.pop()
    return []
