"""Importer for the XTM 1.0 subset used to declare typed relations.

The input carries topics and binary associations.  Naming conventions turn
them into knowledge base records:

* a topic whose ``instanceOf`` references ``#AssociativeRelation`` declares a
  relation type named after the topic id;
* a topic whose ``instanceOf`` reference ends in ``RelationMember`` declares a
  role belonging to the type named by that reference minus the suffix; the
  first role declared for a type becomes its target role, the second its
  source role;
* an association typed ``#HierarchicalRelation`` (roles broaderTermMember and
  narrowerTermMember) becomes a generic hierarchy edge, ``#PartitiveRelation``
  (wholeMember/partMember) a whole/part edge, and any other type a typed
  relation instance;
* every other topic, declared or merely referenced as a member player,
  becomes an entity.

XTM carries neither facets nor relation categories.  Entities are assigned to
the facet ``default`` (one warning each); categories come from a sidecar
mapping of type name to category and default to UnspecificAssociation with a
warning.

Input may be a fragment: several top-level elements, xlink prefix never
declared.  Parsing retries inside a wrapping ``topicMap`` element before
reporting the document as malformed.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple, Union

from ..composition import RelationCategory, TransitivityVerdict
from ..errors import (
    AssociationArityError,
    SchemaViolationError,
    UnresolvedFragmentRefError,
    XmlMalformedError,
)
from ..model import Entity, Facet, KbInputs, RelationInstance, RelationType
from .native import _expect_object, _expect_str, _parse_override

_XLINK_NS = "http://www.w3.org/1999/xlink"
_TYPE_MARKER = "AssociativeRelation"
_ROLE_SUFFIX = "RelationMember"
_XML_DECL_RE = re.compile(r"\s*<\?xml[^>]*\?>")

DEFAULT_FACET = Facet(id="default", label="Default")

# Associations of these types carry hierarchy edges; the types are implied
# rather than declared in the document.
_BUILTIN_TYPES = {
    "HierarchicalRelation": RelationType(
        name="HierarchicalRelation",
        category=RelationCategory.GENERIC_HIERARCHY,
        source_role="broaderTermMember",
        target_role="narrowerTermMember",
    ),
    "PartitiveRelation": RelationType(
        name="PartitiveRelation",
        category=RelationCategory.WHOLE_PART_HIERARCHY,
        source_role="wholeMember",
        target_role="partMember",
    ),
}


@dataclass
class Sidecar:
    """Category, role, and composition assignments XTM cannot express.

    ``roles`` maps a relation type name to its (source_role, target_role)
    pair and wins over roles derived from the document.
    """

    categories: Dict[str, RelationCategory] = field(default_factory=dict)
    roles: Dict[str, Tuple[str, str]] = field(default_factory=dict)
    composition_overrides: Dict[
        Tuple[RelationCategory, RelationCategory], TransitivityVerdict
    ] = field(default_factory=dict)


_CATEGORY_VALUES = {c.value: c for c in RelationCategory}


def _parse_category(value: object, path: str) -> RelationCategory:
    name = _expect_str(value, path)
    category = _CATEGORY_VALUES.get(name)
    if category is None:
        raise SchemaViolationError(f"unknown relation category {name!r}", path=path)
    return category


def load_sidecar(text: str) -> Sidecar:
    """Parse a sidecar file.

    The plain form is a JSON object mapping type names to category names.  A
    structured form with the keys ``categories``, ``roles`` and
    ``composition_overrides`` additionally fixes role direction and extends
    the composition table.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"not valid JSON: {exc.msg}", path="$") from exc
    obj = _expect_object(doc, "$")
    sidecar = Sidecar()
    if "categories" not in obj:
        for name, value in obj.items():
            sidecar.categories[name] = _parse_category(value, f"$.{name}")
        return sidecar

    for key in obj:
        if key not in ("categories", "roles", "composition_overrides"):
            raise SchemaViolationError(f"unknown field {key!r}", path=f"$.{key}")
    for name, value in _expect_object(obj["categories"], "$.categories").items():
        sidecar.categories[name] = _parse_category(value, f"$.categories.{name}")
    for name, value in _expect_object(obj.get("roles", {}), "$.roles").items():
        path = f"$.roles.{name}"
        entry = _expect_object(value, path)
        for key in ("source", "target"):
            if key not in entry:
                raise SchemaViolationError(f"missing required field {key!r}", path=f"{path}.{key}")
        sidecar.roles[name] = (
            _expect_str(entry["source"], f"{path}.source"),
            _expect_str(entry["target"], f"{path}.target"),
        )
    overrides = obj.get("composition_overrides", [])
    if not isinstance(overrides, list):
        raise SchemaViolationError("expected an array", path="$.composition_overrides")
    for i, value in enumerate(overrides):
        pair, verdict = _parse_override(value, f"$.composition_overrides[{i}]")
        sidecar.composition_overrides[pair] = verdict
    return sidecar


def _coerce_sidecar(sidecar: Union[Sidecar, Mapping, None]) -> Sidecar:
    if sidecar is None:
        return Sidecar()
    if isinstance(sidecar, Sidecar):
        return sidecar
    coerced = Sidecar()
    for name, value in sidecar.items():
        if isinstance(value, RelationCategory):
            coerced.categories[name] = value
        else:
            coerced.categories[name] = _parse_category(value, f"$.{name}")
    return coerced


def _parse_xml(xml_text: str) -> ET.Element:
    try:
        return ET.fromstring(xml_text)
    except ET.ParseError as first:
        # Fragments have several roots and use the xlink prefix without
        # declaring it; wrap and retry before reporting the original error.
        body = _XML_DECL_RE.sub("", xml_text, count=1)
        wrapped = f'<topicMap xmlns:xlink="{_XLINK_NS}">{body}</topicMap>'
        try:
            return ET.fromstring(wrapped)
        except ET.ParseError:
            line, column = getattr(first, "position", (None, None))
            raise XmlMalformedError(
                f"XML parse error: {first}",
                line=line,
                column=None if column is None else column + 1,
            ) from first


def _local(tag: object) -> str:
    if not isinstance(tag, str):
        return ""
    return tag.rsplit("}", 1)[-1]


def _fragment_id(elem: ET.Element, where: str) -> Optional[str]:
    """The id a topicRef points at; raises on non-local references."""
    href = None
    for key, value in elem.attrib.items():
        if key.rsplit("}", 1)[-1] == "href":
            href = value
            break
    if href is None:
        return None
    if not href.startswith("#") or len(href) < 2:
        raise UnresolvedFragmentRefError(
            f"{where}: reference {href!r} is not a local fragment"
        )
    return href[1:]


def _ref_of(elem: ET.Element, where: str) -> Optional[str]:
    for child in elem:
        if _local(child.tag) == "topicRef":
            return _fragment_id(child, where)
    return None


@dataclass
class _TopicInfo:
    index: int
    id: str
    instance_refs: List[str]
    names: List[str]


@dataclass
class _RawAssociation:
    index: int
    type_id: str
    members: List[Tuple[str, str]]  # (role id, player id)


def _content_elements(root: ET.Element):
    """Yield topic/association/unknown elements, descending into topicMap."""
    if _local(root.tag) in ("topic", "association"):
        yield root
        return
    for child in root:
        if _local(child.tag) == "topicMap":
            yield from _content_elements(child)
        else:
            yield child


def _read_topic(elem: ET.Element, index: int, warnings: List[str]) -> Optional[_TopicInfo]:
    where = f"topic {index}"
    topic_id = elem.get("id")
    if not topic_id:
        warnings.append(f"{where}: missing id attribute, skipped")
        return None
    refs: List[str] = []
    names: List[str] = []
    for child in elem:
        local = _local(child.tag)
        if local == "instanceOf":
            ref = _ref_of(child, where)
            if ref is not None:
                refs.append(ref)
        elif local == "baseName":
            for sub in child:
                sub_local = _local(sub.tag)
                if sub_local == "instanceOf":
                    ref = _ref_of(sub, where)
                    if ref is not None:
                        refs.append(ref)
                elif sub_local == "baseNameString":
                    names.append((sub.text or "").strip())
                elif sub_local:
                    warnings.append(f"{where}: element <{sub_local}> skipped")
        elif local:
            warnings.append(f"{where}: element <{local}> skipped")
    return _TopicInfo(index, topic_id, refs, names)


def _read_association(elem: ET.Element, index: int, warnings: List[str]) -> Optional[_RawAssociation]:
    where = f"association {index}"
    type_id: Optional[str] = None
    members: List[Tuple[str, str]] = []
    complete = True
    for child in elem:
        local = _local(child.tag)
        if local == "instanceOf":
            type_id = _ref_of(child, where)
        elif local == "member":
            role_id: Optional[str] = None
            players: List[str] = []
            for sub in child:
                sub_local = _local(sub.tag)
                if sub_local == "roleSpec":
                    role_id = _ref_of(sub, where)
                elif sub_local == "topicRef":
                    player = _fragment_id(sub, where)
                    if player is not None:
                        players.append(player)
                elif sub_local:
                    warnings.append(f"{where}: element <{sub_local}> skipped")
            if role_id is None or not players:
                warnings.append(f"{where}: member without roleSpec or player, skipped")
                complete = False
                continue
            for player in players:
                members.append((role_id, player))
        elif local:
            warnings.append(f"{where}: element <{local}> skipped")
    if type_id is None:
        warnings.append(f"{where}: missing instanceOf, skipped")
        return None
    if not complete:
        return None
    if len(members) != 2:
        raise AssociationArityError(
            f"{where}: expected exactly 2 role/player members, found {len(members)}"
        )
    if members[0][0] == members[1][0]:
        warnings.append(f"{where}: both members carry role {members[0][0]!r}, skipped")
        return None
    return _RawAssociation(index, type_id, members)


def import_xtm(
    xml_text: str, sidecar: Union[Sidecar, Mapping, None] = None
) -> Tuple[KbInputs, List[str]]:
    """Convert an XTM subset document or fragment into build inputs.

    Returns the inputs plus a list of warnings, each prefixed with the
    element it concerns ("topic 3: ...", "association 1: ...").  Warnings
    never abort the import; malformed XML, non-local references, and
    associations without exactly two members raise.
    """
    side = _coerce_sidecar(sidecar)
    root = _parse_xml(xml_text)
    warnings: List[str] = []

    topic_infos: List[_TopicInfo] = []
    raw_associations: List[_RawAssociation] = []
    topic_count = 0
    association_count = 0
    for position, elem in enumerate(_content_elements(root), start=1):
        local = _local(elem.tag)
        if local == "topic":
            topic_count += 1
            info = _read_topic(elem, topic_count, warnings)
            if info is not None:
                topic_infos.append(info)
        elif local == "association":
            association_count += 1
            raw = _read_association(elem, association_count, warnings)
            if raw is not None:
                raw_associations.append(raw)
        elif local:
            warnings.append(f"element {position}: <{local}> skipped")

    # -- classify topics ---------------------------------------------------
    declared_types: Dict[str, int] = {}
    role_decls: Dict[str, List[str]] = {}
    entity_topics: Dict[str, _TopicInfo] = {}
    for info in topic_infos:
        if info.id == _TYPE_MARKER or info.id.endswith(_ROLE_SUFFIX) or info.id in _BUILTIN_TYPES:
            continue  # schema vocabulary, carries no data of its own
        if _TYPE_MARKER in info.instance_refs:
            if info.id in declared_types:
                warnings.append(
                    f"topic {info.index}: duplicate declaration of relation type {info.id!r} ignored"
                )
            else:
                declared_types[info.id] = info.index
            continue
        member_refs = [r for r in info.instance_refs if r.endswith(_ROLE_SUFFIX)]
        if member_refs:
            owner = member_refs[0][: -len(_ROLE_SUFFIX)]
            roles = role_decls.setdefault(owner, [])
            if info.id in roles:
                warnings.append(
                    f"topic {info.index}: duplicate declaration of role {info.id!r} ignored"
                )
            else:
                roles.append(info.id)
            continue
        previous = entity_topics.get(info.id)
        if previous is None:
            entity_topics[info.id] = info
        else:
            warnings.append(
                f"topic {info.index}: duplicate declaration of {info.id!r}, names merged"
            )
            previous.names.extend(n for n in info.names if n not in previous.names)

    # -- finalize relation types --------------------------------------------
    # Roles not fixed by the sidecar come from role topic declarations
    # (first declared = target role) or, failing that, from the first
    # association of the type (first member = source role).
    assoc_roles: Dict[str, Tuple[str, str]] = {}
    used_types: List[str] = []
    for raw in raw_associations:
        if raw.type_id not in used_types:
            used_types.append(raw.type_id)
        if raw.type_id not in assoc_roles:
            assoc_roles[raw.type_id] = (raw.members[0][0], raw.members[1][0])

    types: Dict[str, RelationType] = {}

    def finalize_type(name: str) -> None:
        if name in types:
            return
        if name in _BUILTIN_TYPES:
            types[name] = _BUILTIN_TYPES[name]
            return
        declared_roles = role_decls.get(name, [])
        if name in side.roles:
            source_role, target_role = side.roles[name]
        elif len(declared_roles) >= 2:
            target_role, source_role = declared_roles[0], declared_roles[1]
            if len(declared_roles) > 2:
                warnings.append(
                    f"type {name!r}: extra role declarations ignored: "
                    + ", ".join(declared_roles[2:])
                )
        elif name in assoc_roles:
            source_role, target_role = assoc_roles[name]
            if declared_roles and declared_roles[0] not in (source_role, target_role):
                warnings.append(
                    f"type {name!r}: declared role {declared_roles[0]!r} never used"
                )
            warnings.append(f"type {name!r}: role order taken from its first association")
        elif len(declared_roles) == 1:
            target_role, source_role = declared_roles[0], "source"
            warnings.append(f"type {name!r}: only one role declared, source role synthesized")
        else:
            source_role, target_role = "source", "target"
            warnings.append(f"type {name!r}: no roles declared, role names synthesized")
        category = side.categories.get(name)
        if category is None:
            category = RelationCategory.UNSPECIFIC_ASSOCIATION
            warnings.append(
                f"type {name!r}: no category in sidecar, defaulting to UnspecificAssociation"
            )
        types[name] = RelationType(
            name=name, category=category, source_role=source_role, target_role=target_role
        )

    for name in declared_types:
        finalize_type(name)
    for name in used_types:
        if name not in declared_types and name not in _BUILTIN_TYPES:
            warnings.append(f"type {name!r}: not declared, inferred from its associations")
        finalize_type(name)

    # -- build instances -----------------------------------------------------
    instances: List[RelationInstance] = []
    player_seen_at: Dict[str, int] = {}
    for raw in raw_associations:
        rt = types[raw.type_id]
        where = f"association {raw.index}"
        by_role = dict(raw.members)
        if set(by_role) != {rt.source_role, rt.target_role}:
            warnings.append(
                f"{where}: roles {sorted(by_role)} do not match type {rt.name!r} "
                f"({rt.source_role!r}/{rt.target_role!r}), skipped"
            )
            continue
        instances.append(
            RelationInstance(
                type=rt.name,
                source=by_role[rt.source_role],
                target=by_role[rt.target_role],
            )
        )
        for _, player in raw.members:
            player_seen_at.setdefault(player, raw.index)

    # -- entities -------------------------------------------------------------
    schema_ids = set(declared_types) | set(_BUILTIN_TYPES) | {_TYPE_MARKER}
    for roles in role_decls.values():
        schema_ids.update(roles)

    entities: List[Entity] = []
    for info in entity_topics.values():
        label = info.names[0] if info.names and info.names[0] else info.id
        entities.append(
            Entity(
                id=info.id,
                preferred_label=label,
                facet=DEFAULT_FACET.id,
                synonyms=tuple(n for n in info.names[1:] if n),
            )
        )
        warnings.append(
            f"topic {info.index}: entity {info.id!r} has no facet information, "
            f"assigned to facet {DEFAULT_FACET.id!r}"
        )
    for player, first_index in player_seen_at.items():
        if player in entity_topics or player in schema_ids:
            continue
        entities.append(
            Entity(
                id=player,
                preferred_label=player.replace("_", " "),
                facet=DEFAULT_FACET.id,
            )
        )
        warnings.append(
            f"association {first_index}: undeclared topic {player!r} "
            f"assigned to facet {DEFAULT_FACET.id!r}"
        )

    inputs = KbInputs(
        facets=[DEFAULT_FACET] if entities else [],
        entities=entities,
        relation_types=[types[name] for name in types],
        relation_instances=instances,
        composition_overrides=dict(side.composition_overrides),
    )
    return inputs, warnings
