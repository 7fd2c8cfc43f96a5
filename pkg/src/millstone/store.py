"""Durable document store keyed by (corpus, id).

Append-only journal per corpus, compacted into immutable segment files.
Document text/metadata is stored in the canonical JSON encoding; embeddings
are stored as raw little-endian float64 alongside, so vector components
survive round trips bit-for-bit.

Layout: <root>/<corpus>/journal.log, <root>/<corpus>/segments/*.seg, <root>/LOCK.
"""

from __future__ import annotations

import json
import os
import struct
import threading
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from .errors import CorruptRecord, LockHeld, UnknownCorpus
from .model import Document, document_from_json, document_to_json, is_valid_corpus

_TOMBSTONE = 0xFFFFFFFF


def _encode_record(doc: Document) -> bytes:
    obj = document_to_json(doc)
    obj.pop("vector", None)
    payload = json.dumps(obj, ensure_ascii=False).encode("utf-8")
    emb = doc.embedding.astype("<f8").tobytes() if doc.embedding is not None else b""
    n_comp = len(doc.embedding) if doc.embedding is not None else 0
    return struct.pack("<II", len(payload), n_comp) + payload + emb


def _read_records(path: Path) -> Iterator[Document]:
    """Yield committed documents; a truncated tail (partial write) is ignored."""
    with open(path, "rb") as fh:
        data = fh.read()
    pos = 0
    while pos + 8 <= len(data):
        json_len, n_comp = struct.unpack_from("<II", data, pos)
        end = pos + 8 + json_len + 8 * n_comp
        if end > len(data):
            break  # partial record from an interrupted write
        payload = data[pos + 8 : pos + 8 + json_len]
        try:
            obj = json.loads(payload.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise CorruptRecord(f"unreadable record in {path}: {exc}") from exc
        doc = document_from_json(obj)
        if n_comp:
            emb = np.frombuffer(data[pos + 8 + json_len : end], dtype="<f8")
            doc = Document(doc.id, doc.corpus, doc.parts, doc.metadata, emb.copy())
        yield doc
        pos = end


class Store:
    """Single-writer document store. Use as a context manager or call close()."""

    def __init__(self, root, readonly: bool = False):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.readonly = readonly
        self._lock_path = self.root / "LOCK"
        self._write_lock = threading.Lock()
        self._docs: dict[str, dict[str, Document]] = {}
        self._journals: dict[str, object] = {}
        if not readonly:
            try:
                fd = os.open(self._lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            except FileExistsError:
                raise LockHeld(f"store at {self.root} is locked by another writer")
            os.write(fd, str(os.getpid()).encode())
            os.close(fd)
        self._load()

    def _load(self):
        for corpus_dir in sorted(self.root.iterdir()):
            if not corpus_dir.is_dir() or not is_valid_corpus(corpus_dir.name):
                continue
            corpus = corpus_dir.name
            docs: dict[str, Document] = {}
            seg_dir = corpus_dir / "segments"
            if seg_dir.is_dir():
                for seg in sorted(seg_dir.glob("*.seg")):
                    for doc in _read_records(seg):
                        docs[doc.id] = doc
            journal = corpus_dir / "journal.log"
            if journal.exists():
                for doc in _read_records(journal):
                    docs[doc.id] = doc
            self._docs[corpus] = docs

    def close(self):
        for fh in self._journals.values():
            fh.close()
        self._journals.clear()
        if not self.readonly and self._lock_path.exists():
            self._lock_path.unlink()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _journal(self, corpus: str):
        fh = self._journals.get(corpus)
        if fh is None:
            corpus_dir = self.root / corpus
            corpus_dir.mkdir(exist_ok=True)
            fh = open(corpus_dir / "journal.log", "ab")
            self._journals[corpus] = fh
        return fh

    @property
    def corpora(self) -> list[str]:
        return sorted(self._docs)

    def put(self, doc: Document) -> None:
        """Upsert; durable (flushed and fsynced) before return."""
        if self.readonly:
            raise LockHeld("store opened read-only")
        with self._write_lock:
            fh = self._journal(doc.corpus)
            fh.write(_encode_record(doc))
            fh.flush()
            os.fsync(fh.fileno())
            self._docs.setdefault(doc.corpus, {})[doc.id] = doc

    def get(self, corpus: str, doc_id: str) -> Optional[Document]:
        return self._docs.get(corpus, {}).get(doc_id)

    def get_many(self, keys) -> list[tuple[tuple[str, str], Optional[Document]]]:
        return [((c, i), self.get(c, i)) for c, i in keys]

    def scan(self, corpus: str) -> Iterator[Document]:
        """Every committed document exactly once, id-ascending (snapshot at call)."""
        if corpus not in self._docs:
            raise UnknownCorpus(f"no corpus {corpus!r} in store")
        snapshot = dict(self._docs[corpus])
        for doc_id in sorted(snapshot):
            yield snapshot[doc_id]

    def count(self, corpus: str) -> int:
        return len(self._docs.get(corpus, {}))

    def compact(self, corpus: str) -> None:
        """Fold the journal into a fresh segment and truncate it."""
        if corpus not in self._docs:
            raise UnknownCorpus(f"no corpus {corpus!r} in store")
        with self._write_lock:
            corpus_dir = self.root / corpus
            seg_dir = corpus_dir / "segments"
            seg_dir.mkdir(exist_ok=True)
            existing = sorted(seg_dir.glob("*.seg"))
            seg_path = seg_dir / f"{len(existing) + 1:06d}.seg"
            tmp = seg_path.with_suffix(".tmp")
            with open(tmp, "wb") as fh:
                for doc_id in sorted(self._docs[corpus]):
                    fh.write(_encode_record(self._docs[corpus][doc_id]))
                fh.flush()
                os.fsync(fh.fileno())
            tmp.rename(seg_path)
            for old in existing:
                old.unlink()
            jh = self._journals.pop(corpus, None)
            if jh:
                jh.close()
            journal = corpus_dir / "journal.log"
            if journal.exists():
                journal.unlink()
