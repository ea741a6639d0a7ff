"""Document records, subject postings, and topic-set retrieval.

Retrieval is post-coordinate: a request for several topics unions their
postings, while per-topic counts stay visible so empty topics still show up
with a zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .errors import DuplicateDocIdError, NotFoundError, UnknownSubjectError
from .model import KnowledgeBase, resolve_label


@dataclass(frozen=True)
class DocumentRecord:
    """One bibliographic record with subject annotations."""

    doc_id: str
    title: str
    year: Optional[int] = None
    creators: Tuple[str, ...] = ()
    subjects: Tuple[str, ...] = ()


class PostingIndex:
    """Entity id -> sorted doc ids, plus the canonicalized records."""

    def __init__(self, records: Dict[str, DocumentRecord], postings: Dict[str, Tuple[str, ...]]):
        self.records = records
        self.postings = postings

    def doc_ids(self, entity_id: str) -> Tuple[str, ...]:
        return self.postings.get(entity_id, ())

    def count(self, entity_id: str) -> int:
        return len(self.postings.get(entity_id, ()))

    def __len__(self) -> int:
        return len(self.records)


class TopicCount(NamedTuple):
    id: str
    label: str
    doc_count: int


@dataclass
class ResultSet:
    """Per-topic counts plus the deduplicated union of their documents."""

    topics: List[TopicCount]
    documents: List[DocumentRecord]


def build_postings(kb: KnowledgeBase, docs: Sequence[DocumentRecord]) -> PostingIndex:
    """Index documents by subject.

    Subjects may be entity ids, preferred labels, or synonyms; they are
    canonicalized to entity ids in the stored records, so the index
    round-trips through an exported corpus unchanged.
    """
    records: Dict[str, DocumentRecord] = {}
    postings: Dict[str, List[str]] = {}
    for doc in docs:
        if doc.doc_id in records:
            raise DuplicateDocIdError(f"duplicate document id {doc.doc_id!r}")
        canonical: List[str] = []
        for subject in doc.subjects:
            try:
                entity_id = resolve_label(kb, subject)
            except NotFoundError:
                raise UnknownSubjectError(
                    f"document {doc.doc_id!r} lists unknown subject {subject!r}"
                ) from None
            if entity_id not in canonical:
                canonical.append(entity_id)
        record = DocumentRecord(
            doc_id=doc.doc_id,
            title=doc.title,
            year=doc.year,
            creators=tuple(doc.creators),
            subjects=tuple(canonical),
        )
        records[doc.doc_id] = record
        for entity_id in canonical:
            postings.setdefault(entity_id, []).append(doc.doc_id)
    return PostingIndex(
        records=records,
        postings={k: tuple(sorted(v)) for k, v in postings.items()},
    )


def retrieve(index: PostingIndex, kb: KnowledgeBase, topics: Iterable[str]) -> ResultSet:
    """Count per topic and union their documents.

    Topics are sorted by case-folded label; documents by descending year
    (undated records last), then doc id.  Topics without postings appear
    with a zero count rather than being dropped.
    """
    topic_ids = list(dict.fromkeys(topics))
    counts = []
    union: Dict[str, DocumentRecord] = {}
    for topic in topic_ids:
        entity = kb.entity(topic)
        doc_ids = index.doc_ids(topic)
        counts.append(TopicCount(topic, entity.preferred_label, len(doc_ids)))
        for doc_id in doc_ids:
            union[doc_id] = index.records[doc_id]
    counts.sort(key=lambda t: (t.label.casefold(), t.id))

    def doc_key(record: DocumentRecord):
        return (record.year is None, -(record.year or 0), record.doc_id)

    documents = sorted(union.values(), key=doc_key)
    return ResultSet(topics=counts, documents=documents)
