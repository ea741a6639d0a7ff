"""Readers and writers: XTM subset import, native JSON format, JSONL corpus."""

from .native import (
    document_to_json,
    load_corpus,
    load_native,
    parse_document_record,
    save_corpus,
    save_native,
)
from .xtm import DEFAULT_FACET, Sidecar, import_xtm, load_sidecar

__all__ = [
    "DEFAULT_FACET",
    "Sidecar",
    "document_to_json",
    "import_xtm",
    "load_corpus",
    "load_native",
    "load_sidecar",
    "parse_document_record",
    "save_corpus",
    "save_native",
]
