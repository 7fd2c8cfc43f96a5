"""Corpus-independent document schema and shared value types.

Documents from every source (publications, patent offices, user uploads) are
normalized into one record shape: an id, a corpus, a list of named text parts,
an open metadata map, and an optional dense embedding.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np

DEFAULT_DIM = 768

PART_KEYS = ("title", "abstract", "claims", "description")

_CORPUS_RE = re.compile(r"^[a-z0-9_]+$")


class SimilarityMetric(str, Enum):
    COSINE = "cosine"
    L1 = "l1"
    L2 = "l2"

    @classmethod
    def parse(cls, tag: str) -> "SimilarityMetric":
        try:
            return cls(tag)
        except ValueError:
            from .errors import UnknownMetric

            raise UnknownMetric(f"unknown metric {tag!r}; expected cosine, l1 or l2")


def is_valid_corpus(name: str) -> bool:
    return bool(name) and _CORPUS_RE.match(name) is not None


def corpus_to_index(corpus: str) -> str:
    """API-facing index name for a corpus, e.g. "epo" -> "epo_cos"."""
    return f"{corpus}_cos"


def index_to_corpus(index: str) -> str:
    """Inverse of corpus_to_index; raises UnknownIndex on a malformed name."""
    from .errors import UnknownIndex

    if not index.endswith("_cos"):
        raise UnknownIndex(f"index {index!r} is not a known index name")
    corpus = index[: -len("_cos")]
    if not is_valid_corpus(corpus):
        raise UnknownIndex(f"index {index!r} is not a known index name")
    return corpus


@dataclass(frozen=True)
class DocumentPart:
    key: str
    value: str


@dataclass(frozen=True)
class Document:
    id: str
    corpus: str
    parts: tuple[DocumentPart, ...]
    metadata: dict[str, str] = field(default_factory=dict)
    embedding: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if self.embedding is not None:
            emb = np.asarray(self.embedding, dtype=np.float64)
            emb.setflags(write=False)
            object.__setattr__(self, "embedding", emb)

    def part(self, key: str) -> Optional[str]:
        for p in self.parts:
            if p.key == key:
                return p.value
        return None

    @property
    def title(self) -> Optional[str]:
        return self.part("title")

    @property
    def abstract(self) -> Optional[str]:
        return self.part("abstract")

    def __eq__(self, other):
        if not isinstance(other, Document):
            return NotImplemented
        if (self.id, self.corpus, self.parts, self.metadata) != (
            other.id,
            other.corpus,
            other.parts,
            other.metadata,
        ):
            return False
        if (self.embedding is None) != (other.embedding is None):
            return False
        if self.embedding is not None:
            return np.array_equal(self.embedding, other.embedding)
        return True


def validate_document(doc: Document, dim: int = DEFAULT_DIM) -> list[str]:
    """Check every Document invariant; returns a list of violations (empty = ok)."""
    violations = []
    if not doc.id:
        violations.append("empty id")
    if not is_valid_corpus(doc.corpus):
        violations.append(f"invalid corpus name {doc.corpus!r}")
    if not doc.parts:
        violations.append("no parts")
    else:
        for p in doc.parts:
            if p.key not in PART_KEYS:
                violations.append(f"unknown part key {p.key!r}")
        if all(not p.value for p in doc.parts):
            violations.append("all parts empty")
    if not all(isinstance(k, str) and isinstance(v, str) for k, v in doc.metadata.items()):
        violations.append("metadata must map strings to strings")
    if doc.embedding is not None:
        if doc.embedding.ndim != 1 or len(doc.embedding) != dim:
            violations.append(
                f"dimension mismatch: embedding has {doc.embedding.size} components, expected {dim}"
            )
        elif not np.all(np.isfinite(doc.embedding)):
            violations.append("embedding has non-finite components")
    return violations


def document_to_json(doc: Document) -> dict:
    """Canonical wire/disk encoding. ``vector`` is omitted when absent."""
    obj = {
        "id": doc.id,
        "index": corpus_to_index(doc.corpus),
        "documentParts": [{"key": p.key, "value": p.value} for p in doc.parts],
        "metadata": dict(doc.metadata),
    }
    if doc.embedding is not None:
        obj["vector"] = [float(x) for x in doc.embedding]
    return obj


def document_from_json(obj: dict) -> Document:
    vector = obj.get("vector")
    return Document(
        id=obj["id"],
        corpus=index_to_corpus(obj["index"]),
        parts=tuple(DocumentPart(p["key"], p["value"]) for p in obj["documentParts"]),
        metadata=dict(obj.get("metadata", {})),
        embedding=np.asarray(vector, dtype=np.float64) if vector is not None else None,
    )


def dumps_document(doc: Document) -> str:
    return json.dumps(document_to_json(doc), ensure_ascii=False, sort_keys=False)


def loads_document(text: str) -> Document:
    return document_from_json(json.loads(text))
