"""Ontology-backed indexing and retrieval over typed, categorized relations.

The package keeps a faceted vocabulary (one generic mono-hierarchy per
facet), typed relation instances between entities, and a document corpus
indexed by subject.  On top of that sit a pairwise transitivity table for
relation compositions, hierarchy-aware inference helpers, and a small logic
query language with predefined broader/narrower rules.
"""

from .composition import RelationCategory, TransitivityVerdict, compose
from .datasets import DATASETS, load_dataset
from .documents import (
    DocumentRecord,
    PostingIndex,
    ResultSet,
    TopicCount,
    build_postings,
    retrieve,
)
from .errors import KbirError
from .inference import (
    AttachedRelation,
    PathSpec,
    PathStep,
    ancestors,
    carriers_of,
    check_path,
    descendants,
    inherited_relations,
    rt_neighborhood,
)
from .ingest import (
    Sidecar,
    import_xtm,
    load_corpus,
    load_native,
    load_sidecar,
    save_corpus,
    save_native,
)
from .model import (
    Entity,
    Facet,
    Finding,
    KbInputs,
    KnowledgeBase,
    RelationInstance,
    RelationType,
    ValidationReport,
    build_kb,
    normalize_label,
    resolve_label,
    validate_inputs,
    validate_kb,
)
from .query import evaluate, parse_program, parse_rules, prelude_text
from .service import QueryRequest, ServiceState, create_app, handle_query, topic_detail

__all__ = [
    "AttachedRelation",
    "DATASETS",
    "DocumentRecord",
    "Entity",
    "Facet",
    "Finding",
    "KbInputs",
    "KbirError",
    "KnowledgeBase",
    "PathSpec",
    "PathStep",
    "PostingIndex",
    "QueryRequest",
    "RelationCategory",
    "RelationInstance",
    "RelationType",
    "ResultSet",
    "ServiceState",
    "Sidecar",
    "TopicCount",
    "TransitivityVerdict",
    "ValidationReport",
    "ancestors",
    "build_kb",
    "build_postings",
    "carriers_of",
    "check_path",
    "compose",
    "create_app",
    "descendants",
    "evaluate",
    "handle_query",
    "import_xtm",
    "inherited_relations",
    "load_corpus",
    "load_dataset",
    "load_native",
    "load_sidecar",
    "normalize_label",
    "parse_program",
    "parse_rules",
    "prelude_text",
    "resolve_label",
    "retrieve",
    "rt_neighborhood",
    "save_corpus",
    "save_native",
    "topic_detail",
    "validate_inputs",
    "validate_kb",
]
