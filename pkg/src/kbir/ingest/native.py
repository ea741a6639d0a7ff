"""Native JSON interchange format for knowledge bases and document corpora.

A knowledge base file is a single JSON object with the keys ``facets``,
``entities``, ``relation_types``, ``relations``, ``documents`` and
``composition_overrides``.  ``save_native`` emits a canonical form (sorted
records, two-space indentation, trailing newline), so saving what was just
loaded reproduces the file byte for byte.

Corpus files are JSON Lines: one document record per line, same field names
as the ``documents`` entries of a knowledge base file.
"""

from __future__ import annotations

import json
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from ..composition import RelationCategory, TransitivityVerdict
from ..documents import DocumentRecord
from ..errors import SchemaViolationError
from ..model import Entity, Facet, KbInputs, KnowledgeBase, RelationInstance, RelationType

_TOP_KEYS = (
    "facets",
    "entities",
    "relation_types",
    "relations",
    "documents",
    "composition_overrides",
)
_REQUIRED_TOP_KEYS = ("facets", "entities")

_CATEGORY_VALUES = {c.value: c for c in RelationCategory}
_VERDICT_VALUES = {v.value: v for v in TransitivityVerdict}


def _fail(path: str, message: str) -> None:
    raise SchemaViolationError(message, path=path)


def _expect_object(value: Any, path: str) -> Dict[str, Any]:
    if not isinstance(value, dict):
        _fail(path, f"expected an object, got {type(value).__name__}")
    return value


def _expect_list(value: Any, path: str) -> List[Any]:
    if not isinstance(value, list):
        _fail(path, f"expected an array, got {type(value).__name__}")
    return value


def _expect_str(value: Any, path: str) -> str:
    if not isinstance(value, str):
        _fail(path, f"expected a string, got {type(value).__name__}")
    return value


def _take(obj: Dict[str, Any], path: str, required: Sequence[str], optional: Sequence[str] = ()) -> None:
    for key in required:
        if key not in obj:
            _fail(f"{path}.{key}", f"missing required field {key!r}")
    for key in obj:
        if key not in required and key not in optional:
            _fail(f"{path}.{key}", f"unknown field {key!r}")


def _str_list(value: Any, path: str) -> Tuple[str, ...]:
    items = _expect_list(value, path)
    return tuple(_expect_str(v, f"{path}[{i}]") for i, v in enumerate(items))


def parse_document_record(value: Any, path: str) -> DocumentRecord:
    obj = _expect_object(value, path)
    _take(obj, path, ("doc_id", "title"), ("year", "creators", "subjects"))
    year = obj.get("year")
    if year is not None and (isinstance(year, bool) or not isinstance(year, int)):
        _fail(f"{path}.year", "expected an integer or null")
    return DocumentRecord(
        doc_id=_expect_str(obj["doc_id"], f"{path}.doc_id"),
        title=_expect_str(obj["title"], f"{path}.title"),
        year=year,
        creators=_str_list(obj.get("creators", []), f"{path}.creators"),
        subjects=_str_list(obj.get("subjects", []), f"{path}.subjects"),
    )


def _parse_facet(value: Any, path: str) -> Facet:
    obj = _expect_object(value, path)
    _take(obj, path, ("id", "label"))
    return Facet(
        id=_expect_str(obj["id"], f"{path}.id"),
        label=_expect_str(obj["label"], f"{path}.label"),
    )


def _parse_entity(value: Any, path: str) -> Entity:
    obj = _expect_object(value, path)
    _take(obj, path, ("id", "preferred_label", "facet"), ("synonyms",))
    return Entity(
        id=_expect_str(obj["id"], f"{path}.id"),
        preferred_label=_expect_str(obj["preferred_label"], f"{path}.preferred_label"),
        facet=_expect_str(obj["facet"], f"{path}.facet"),
        synonyms=_str_list(obj.get("synonyms", []), f"{path}.synonyms"),
    )


def _parse_relation_type(value: Any, path: str) -> RelationType:
    obj = _expect_object(value, path)
    _take(obj, path, ("name", "category", "source_role", "target_role"))
    category_name = _expect_str(obj["category"], f"{path}.category")
    category = _CATEGORY_VALUES.get(category_name)
    if category is None:
        _fail(f"{path}.category", f"unknown relation category {category_name!r}")
    return RelationType(
        name=_expect_str(obj["name"], f"{path}.name"),
        category=category,
        source_role=_expect_str(obj["source_role"], f"{path}.source_role"),
        target_role=_expect_str(obj["target_role"], f"{path}.target_role"),
    )


def _parse_relation(value: Any, path: str) -> RelationInstance:
    obj = _expect_object(value, path)
    _take(obj, path, ("type", "source", "target"))
    return RelationInstance(
        type=_expect_str(obj["type"], f"{path}.type"),
        source=_expect_str(obj["source"], f"{path}.source"),
        target=_expect_str(obj["target"], f"{path}.target"),
    )


def _parse_override(value: Any, path: str) -> Tuple[Tuple[RelationCategory, RelationCategory], TransitivityVerdict]:
    obj = _expect_object(value, path)
    _take(obj, path, ("first", "second", "verdict"))
    pair = []
    for key in ("first", "second"):
        name = _expect_str(obj[key], f"{path}.{key}")
        category = _CATEGORY_VALUES.get(name)
        if category is None:
            _fail(f"{path}.{key}", f"unknown relation category {name!r}")
        pair.append(category)
    verdict_name = _expect_str(obj["verdict"], f"{path}.verdict")
    verdict = _VERDICT_VALUES.get(verdict_name)
    if verdict is None:
        _fail(f"{path}.verdict", f"unknown transitivity verdict {verdict_name!r}")
    return (pair[0], pair[1]), verdict


def load_native(text: str) -> Tuple[KbInputs, Tuple[DocumentRecord, ...]]:
    """Parse a knowledge base file into build inputs plus its document corpus.

    Raises ``SchemaViolationError`` with a ``$.field`` path for any structural
    problem; referential problems are left to ``build_kb``/``validate_inputs``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"not valid JSON: {exc.msg}", path="$") from exc
    obj = _expect_object(doc, "$")
    _take(obj, "$", _REQUIRED_TOP_KEYS, tuple(k for k in _TOP_KEYS if k not in _REQUIRED_TOP_KEYS))

    inputs = KbInputs(
        facets=[_parse_facet(v, f"$.facets[{i}]") for i, v in enumerate(_expect_list(obj["facets"], "$.facets"))],
        entities=[_parse_entity(v, f"$.entities[{i}]") for i, v in enumerate(_expect_list(obj["entities"], "$.entities"))],
        relation_types=[
            _parse_relation_type(v, f"$.relation_types[{i}]")
            for i, v in enumerate(_expect_list(obj.get("relation_types", []), "$.relation_types"))
        ],
        relation_instances=[
            _parse_relation(v, f"$.relations[{i}]")
            for i, v in enumerate(_expect_list(obj.get("relations", []), "$.relations"))
        ],
    )
    for i, v in enumerate(_expect_list(obj.get("composition_overrides", []), "$.composition_overrides")):
        pair, verdict = _parse_override(v, f"$.composition_overrides[{i}]")
        inputs.composition_overrides[pair] = verdict
    documents = tuple(
        parse_document_record(v, f"$.documents[{i}]")
        for i, v in enumerate(_expect_list(obj.get("documents", []), "$.documents"))
    )
    return inputs, documents


def document_to_json(record: DocumentRecord) -> Dict[str, Any]:
    return {
        "doc_id": record.doc_id,
        "title": record.title,
        "year": record.year,
        "creators": list(record.creators),
        "subjects": list(record.subjects),
    }


def save_native(kb: KnowledgeBase, corpus: Iterable[DocumentRecord] = ()) -> str:
    """Serialize to the canonical form: sorted records, stable key order."""
    doc = {
        "facets": [
            {"id": f.id, "label": f.label}
            for f in sorted(kb.facets.values(), key=lambda f: f.id)
        ],
        "entities": [
            {
                "id": e.id,
                "preferred_label": e.preferred_label,
                "facet": e.facet,
                "synonyms": list(e.synonyms),
            }
            for e in sorted(kb.entities.values(), key=lambda e: e.id)
        ],
        "relation_types": [
            {
                "name": t.name,
                "category": t.category.value,
                "source_role": t.source_role,
                "target_role": t.target_role,
            }
            for t in sorted(kb.relation_types.values(), key=lambda t: t.name)
        ],
        "relations": [
            {"type": r.type, "source": r.source, "target": r.target}
            for r in sorted(kb.relation_instances, key=lambda r: (r.type, r.source, r.target))
        ],
        "documents": [
            document_to_json(d) for d in sorted(corpus, key=lambda d: d.doc_id)
        ],
        "composition_overrides": [
            {"first": first.value, "second": second.value, "verdict": verdict.value}
            for (first, second), verdict in sorted(
                kb.composition_overrides.items(),
                key=lambda kv: (kv[0][0].value, kv[0][1].value),
            )
        ],
    }
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def load_corpus(text: str) -> Tuple[DocumentRecord, ...]:
    """Parse a JSON Lines corpus; blank lines are allowed and skipped."""
    records: List[DocumentRecord] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        path = f"$.line{lineno}"
        try:
            value = json.loads(line)
        except json.JSONDecodeError as exc:
            raise SchemaViolationError(
                f"line {lineno}: not valid JSON: {exc.msg}", path=path
            ) from exc
        records.append(parse_document_record(value, path))
    return tuple(records)


def save_corpus(corpus: Iterable[DocumentRecord]) -> str:
    lines = [
        json.dumps(document_to_json(d), ensure_ascii=False)
        for d in sorted(corpus, key=lambda d: d.doc_id)
    ]
    return "\n".join(lines) + ("\n" if lines else "")
