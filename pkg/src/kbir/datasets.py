"""Bundled example knowledge bases.

``asist`` is a thesaurus excerpt with typed relations and a small document
corpus; ``songbirds`` pairs a taxonomy facet with a behaviour facet to
demonstrate property inheritance.  Both files are in the native format, so
they double as format references.
"""

from importlib import resources
from typing import Tuple

from .documents import DocumentRecord
from .ingest import load_native
from .model import KnowledgeBase

DATASETS = ("asist", "songbirds")


def dataset_text(name: str) -> str:
    if name not in DATASETS:
        raise ValueError(f"unknown dataset {name!r}; available: {', '.join(DATASETS)}")
    return resources.files("kbir.data").joinpath(f"{name}.json").read_text(encoding="utf-8")


def load_dataset(name: str) -> Tuple[KnowledgeBase, Tuple[DocumentRecord, ...]]:
    inputs, corpus = load_native(dataset_text(name))
    return inputs.build(), corpus
