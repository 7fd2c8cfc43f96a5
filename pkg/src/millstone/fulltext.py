"""Keyword search over stored documents (BM25-ranked inverted index)."""

from __future__ import annotations

import math
import threading
from collections import Counter
from dataclasses import dataclass
from typing import Optional

from .encoder import word_tokenize
from .errors import DuplicateId, EmptyQuery
from .model import Document

BM25_K1 = 1.2
BM25_B = 0.75

# Fixed stopword list (30 high-frequency English function words).
STOPWORDS = frozenset(
    """a an and are as at be but by for from has have in is it its of on or
    that the this to was were will with not they""".split()
)
assert len(STOPWORDS) == 30


def analyze(text: str) -> list[str]:
    """Tokenize exactly as the encoder does, then drop stopwords."""
    return [w for w in word_tokenize(text) if w not in STOPWORDS]


@dataclass(frozen=True)
class KeywordHit:
    id: str
    corpus: str
    score: float


class InvertedIndex:
    """Term -> postings of ((corpus, id), term frequency), plus length stats."""

    def __init__(self):
        self._postings: dict[str, list[tuple[tuple[str, str], int]]] = {}
        self._doc_len: dict[tuple[str, str], int] = {}
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._doc_len)

    def __contains__(self, key: tuple[str, str]) -> bool:
        return key in self._doc_len

    @property
    def avg_doc_len(self) -> float:
        if not self._doc_len:
            return 0.0
        return sum(self._doc_len.values()) / len(self._doc_len)

    def index_document(self, doc: Document) -> None:
        with self._write_lock:
            key = (doc.corpus, doc.id)
            if key in self._doc_len:
                raise DuplicateId(f"document {key} already indexed")
            terms = analyze(" ".join(p.value for p in doc.parts if p.key in ("title", "abstract")))
            self._doc_len[key] = len(terms)
            for term, tf in Counter(terms).items():
                postings = self._postings.setdefault(term, [])
                postings.append((key, tf))
                postings.sort(key=lambda e: e[0])

    def remove_document(self, corpus: str, doc_id: str) -> None:
        with self._write_lock:
            key = (corpus, doc_id)
            self._doc_len.pop(key, None)
            for term in list(self._postings):
                pruned = [e for e in self._postings[term] if e[0] != key]
                if pruned:
                    self._postings[term] = pruned
                else:
                    del self._postings[term]

    def search_keyword(
        self, query: str, corpus: Optional[str] = None, k: int = 10
    ) -> list[KeywordHit]:
        """BM25 over OR-of-terms; ties broken by (corpus, id) ascending."""
        terms = analyze(query)
        if not terms:
            raise EmptyQuery("no searchable terms after analysis")
        docs = [key for key in self._doc_len if corpus is None or key[0] == corpus]
        n = len(docs)
        if n == 0:
            return []
        in_scope = set(docs)
        avgdl = sum(self._doc_len[d] for d in docs) / n
        scores: dict[tuple[str, str], float] = {}
        for term in set(terms):
            postings = [(key, tf) for key, tf in self._postings.get(term, []) if key in in_scope]
            df = len(postings)
            if df == 0:
                continue
            idf = math.log(1.0 + (n - df + 0.5) / (df + 0.5))
            for key, tf in postings:
                dl = self._doc_len[key]
                denom = tf + BM25_K1 * (1.0 - BM25_B + BM25_B * dl / (avgdl or 1.0))
                scores[key] = scores.get(key, 0.0) + idf * tf * (BM25_K1 + 1.0) / denom
        ranked = sorted(scores.items(), key=lambda e: (-e[1], e[0]))
        return [KeywordHit(doc_id, c, score) for (c, doc_id), score in ranked[:k]]
