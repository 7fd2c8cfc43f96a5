"""Shared engine handle: the store plus the search indexes built over it."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from .ann import HnswIndex, HnswParams
from .encoder import EncoderConfig
from .errors import UnknownIndex
from .fulltext import InvertedIndex
from .model import Document, corpus_to_index, index_to_corpus
from .store import Store


class Engine:
    """Store + per-corpus ANN index + global keyword index, kept in sync."""

    def __init__(
        self,
        store_root,
        encoder_cfg: Optional[EncoderConfig] = None,
        hnsw_params: Optional[HnswParams] = None,
        readonly: bool = False,
    ):
        self.encoder_cfg = encoder_cfg or EncoderConfig()
        self.hnsw_params = hnsw_params or HnswParams()
        self.store = Store(Path(store_root), readonly=readonly)
        self.ann: dict[str, HnswIndex] = {}
        self.fulltext = InvertedIndex()
        for corpus in self.store.corpora:
            for doc in self.store.scan(corpus):
                self._index_document(doc)

    def close(self):
        self.store.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _ann_for(self, corpus: str) -> HnswIndex:
        idx = self.ann.get(corpus)
        if idx is None:
            idx = HnswIndex(self.encoder_cfg.dim, self.hnsw_params, corpus)
            self.ann[corpus] = idx
        return idx

    def _index_document(self, doc: Document) -> None:
        if doc.embedding is not None:
            self._ann_for(doc.corpus).insert(doc.id, doc.embedding)
        if any(p.value for p in doc.parts):
            self.fulltext.index_document(doc)

    def load_document(self, doc: Document) -> None:
        """Upsert into store and all indexes."""
        prior = self.store.get(doc.corpus, doc.id)
        if prior is not None:
            if prior.embedding is not None and doc.corpus in self.ann and doc.id in self.ann[doc.corpus]:
                self.ann[doc.corpus].remove(doc.id)
            if (doc.corpus, doc.id) in self.fulltext:
                self.fulltext.remove_document(doc.corpus, doc.id)
        self.store.put(doc)
        self._index_document(doc)

    def resolve_index(self, index_name: str) -> str:
        """Map an API index name (e.g. "epo_cos") to a known corpus."""
        corpus = index_to_corpus(index_name)
        if corpus not in self.store.corpora:
            raise UnknownIndex(f"unknown index {index_name!r}")
        return corpus

    def index_names(self) -> list[str]:
        return [corpus_to_index(c) for c in self.store.corpora]
