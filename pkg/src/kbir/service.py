"""HTTP service: query evaluation and topic detail over one loaded snapshot.

The service owns an immutable :class:`ServiceState` (knowledge base, posting
index, evaluation budget).  Requests never mutate it, so any number of them
may run concurrently; reloading means building a new state and swapping the
reference.

Endpoints:

* ``POST /api/query``  body ``{"query": str, "rules": str?, "include_documents": bool?}``
* ``GET /api/topics/{id}``  relation groups and document count for one entity
* ``GET /api/health``

Errors come back as ``{"error": {"kind", "message", "line", "column"}}`` with
status 400 (bad request or query) or 404 (unknown topic).  Request bodies are
capped at 64 KiB and evaluation at a wall-clock budget (10 s by default);
exceeding the budget yields kind ``Timeout``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

from .composition import HIERARCHICAL, RelationCategory
from .documents import DocumentRecord, PostingIndex, build_postings, retrieve
from .errors import InvalidArgumentError, KbirError, NotFoundError
from .model import KnowledgeBase
from .query import evaluate, parse_program

MAX_BODY_BYTES = 64 * 1024
DEFAULT_BUDGET_SECONDS = 10.0


@dataclass
class QueryRequest:
    query: str
    rules: str = ""
    include_documents: bool = True

    @classmethod
    def from_json(cls, raw: bytes) -> "QueryRequest":
        try:
            doc = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise InvalidArgumentError(f"request body is not valid JSON: {exc.msg}") from exc
        if not isinstance(doc, dict):
            raise InvalidArgumentError("request body must be a JSON object")
        for key in doc:
            if key not in ("query", "rules", "include_documents"):
                raise InvalidArgumentError(f"unknown request field {key!r}")
        query = doc.get("query")
        if not isinstance(query, str):
            raise InvalidArgumentError("field 'query' must be a string")
        rules = doc.get("rules", "")
        if rules is None:
            rules = ""
        if not isinstance(rules, str):
            raise InvalidArgumentError("field 'rules' must be a string")
        include = doc.get("include_documents", True)
        if not isinstance(include, bool):
            raise InvalidArgumentError("field 'include_documents' must be a boolean")
        return cls(query=query, rules=rules, include_documents=include)


@dataclass
class ServiceState:
    """Everything a request needs, built once and then only read."""

    kb: KnowledgeBase
    index: PostingIndex
    budget_seconds: Optional[float] = DEFAULT_BUDGET_SECONDS

    @classmethod
    def from_kb(
        cls,
        kb: KnowledgeBase,
        corpus: Iterable[DocumentRecord] = (),
        budget_seconds: Optional[float] = DEFAULT_BUDGET_SECONDS,
    ) -> "ServiceState":
        return cls(kb=kb, index=build_postings(kb, list(corpus)), budget_seconds=budget_seconds)


def _document_json(record: DocumentRecord) -> dict:
    return {
        "doc_id": record.doc_id,
        "title": record.title,
        "year": record.year,
        "creators": list(record.creators),
    }


def handle_query(state: ServiceState, req: QueryRequest) -> dict:
    """Parse, evaluate, and retrieve; the topics pane follows the first
    selected variable's bindings.

    Raises ``KbirError`` subclasses; the HTTP layer turns them into payloads.
    """
    program = parse_program(req.query, req.rules)
    rows = evaluate(state.kb, program, budget_seconds=state.budget_seconds)

    topics: List[dict] = []
    documents: List[dict] = []
    if program.select:
        first = program.select[0]
        ids = dict.fromkeys(row[first] for row in rows)
        result = retrieve(state.index, state.kb, ids)
        topics = [
            {"id": t.id, "label": t.label, "doc_count": t.doc_count}
            for t in result.topics
        ]
        if req.include_documents:
            documents = [_document_json(d) for d in result.documents]
    return {
        "topics": topics,
        "documents": documents,
        "bindings": [{f"${name}": value for name, value in row.items()} for row in rows],
        "warnings": list(program.warnings),
    }


def _humanize_role(role: str) -> str:
    """Camel-case role token to display words: isMethodOf -> "is method of"."""
    words = re.sub(r"(?<=[a-z0-9])(?=[A-Z])", " ", role.replace("_", " "))
    return words.lower()


def topic_detail(state: ServiceState, entity_id: str) -> dict:
    """Relations of one entity grouped by type, with the entity's role as the
    subheading and the opposite endpoints beneath it.

    Typed associative relations come first (one group per type, sorted by
    name), then any typed non-generic hierarchy, then a single merged
    Hierarchical Relation group with Broader Term / Narrower Term entries.
    """
    kb = state.kb
    if entity_id not in kb.entities:
        raise NotFoundError(f"no topic with id {entity_id!r}")
    entity = kb.entities[entity_id]

    # type name -> role -> opposite endpoint ids
    assoc: Dict[str, Dict[str, List[str]]] = {}
    other_hierarchy: Dict[str, Dict[str, List[str]]] = {}
    for inst in kb.instances_at(entity_id):
        rt = kb.relation_types[inst.type]
        if rt.category is RelationCategory.GENERIC_HIERARCHY:
            continue  # merged group below, via the hierarchy maps
        bucket = other_hierarchy if rt.category in HIERARCHICAL else assoc
        by_role = bucket.setdefault(rt.name, {})
        if inst.source == entity_id:
            by_role.setdefault(rt.source_role, []).append(inst.target)
        if inst.target == entity_id:
            by_role.setdefault(rt.target_role, []).append(inst.source)

    def entity_entry(eid: str) -> dict:
        return {"id": eid, "label": kb.label(eid)}

    def sorted_entries(ids: List[str]) -> List[dict]:
        unique = dict.fromkeys(ids)
        return [
            entity_entry(eid)
            for eid in sorted(unique, key=lambda e: (kb.label(e).casefold(), e))
        ]

    def roles_block(rt_name: str, by_role: Dict[str, List[str]]) -> List[dict]:
        rt = kb.relation_types[rt_name]
        block = []
        for role in (rt.source_role, rt.target_role):
            ids = by_role.get(role)
            if ids:
                block.append(
                    {"role": role, "label": _humanize_role(role), "entities": sorted_entries(ids)}
                )
        return block

    groups: List[dict] = []
    for name in sorted(assoc):
        groups.append(
            {
                "heading": f"Associative Relation ({name})",
                "type": name,
                "roles": roles_block(name, assoc[name]),
            }
        )
    for name in sorted(other_hierarchy):
        groups.append(
            {
                "heading": f"Hierarchical Relation ({name})",
                "type": name,
                "roles": roles_block(name, other_hierarchy[name]),
            }
        )

    children = list(kb.generic_children.get(entity_id, ()))
    parent = kb.generic_parent.get(entity_id)
    if children or parent:
        roles = []
        if children:
            roles.append(
                {"role": "broaderTerm", "label": "Broader Term", "entities": sorted_entries(children)}
            )
        if parent:
            roles.append(
                {"role": "narrowerTerm", "label": "Narrower Term", "entities": sorted_entries([parent])}
            )
        groups.append({"heading": "Hierarchical Relation", "type": None, "roles": roles})

    return {
        "id": entity.id,
        "label": entity.preferred_label,
        "facet": entity.facet,
        "synonyms": list(entity.synonyms),
        "doc_count": state.index.count(entity_id),
        "groups": groups,
    }


def create_app(state: ServiceState, ui_dir: Optional[str] = None):
    """Build the FastAPI application around one snapshot.

    ``ui_dir``, when given, is served statically at the root path so the web
    client and the API share an origin.
    """
    from fastapi import FastAPI, Request
    from fastapi.responses import JSONResponse

    app = FastAPI(title="kbir", docs_url=None, redoc_url=None, openapi_url=None)
    app.state.service = state

    def error_response(exc: KbirError, status: int) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": exc.payload()})

    @app.post("/api/query")
    async def query_endpoint(request: Request):
        body = await request.body()
        if len(body) > MAX_BODY_BYTES:
            return error_response(
                InvalidArgumentError(
                    f"request body exceeds {MAX_BODY_BYTES} bytes"
                ),
                400,
            )
        try:
            req = QueryRequest.from_json(body)
            return handle_query(app.state.service, req)
        except KbirError as exc:
            return error_response(exc, 400)

    @app.get("/api/topics/{entity_id}")
    async def topic_endpoint(entity_id: str):
        try:
            return topic_detail(app.state.service, entity_id)
        except NotFoundError as exc:
            return error_response(exc, 404)
        except KbirError as exc:
            return error_response(exc, 400)

    @app.get("/api/health")
    async def health():
        return {"status": "ok"}

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
