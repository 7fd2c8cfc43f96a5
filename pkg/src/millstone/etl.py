"""Corpus ingestion: parse source feeds, encode, and load store + indexes.

Two fixture input formats stand in for the real office feeds:

* publications — JSONL, one object per line with
  ``{id, title, abstract, year, journal, doi, authors}``;
* patents — one XML file per document::

      <patent-document pub-number="EP19164094B1" country="EP" kind="B1" date="20220316">
        <title>...</title>
        <abstract>...</abstract>
        <claims>...</claims>
        <description>...</description>
        <classification>B60R 21/36</classification>
      </patent-document>

Both arrive through a filesystem drop directory; incremental runs skip files
at or below the persisted watermark (file mtime, then name).
"""

from __future__ import annotations

import json
import time
import xml.etree.ElementTree as ET
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .encoder import EncodeRequest, encode
from .engine import Engine
from .errors import EmptyDocument, AllWordsFiltered, SourceUnreadable
from .model import Document, DocumentPart

PATENT_CORPORA = ("epo", "uspto", "wipo")


@dataclass(frozen=True)
class SourceSpec:
    corpus: str
    format: str  # "publication_jsonl" | "patent_xml"
    location: Path

    def __post_init__(self):
        object.__setattr__(self, "location", Path(self.location))
        if self.format not in ("publication_jsonl", "patent_xml"):
            raise ValueError(f"unknown source format {self.format!r}")
        if self.format == "patent_xml" and self.corpus not in PATENT_CORPORA:
            raise ValueError(f"patent corpus must be one of {PATENT_CORPORA}")


@dataclass
class PipelineReport:
    seen: int = 0
    parsed: int = 0
    rejected: int = 0
    encoded: int = 0
    loaded: int = 0
    rejection_reasons: dict[str, int] = field(default_factory=dict)
    wall_time_s: float = 0.0

    def reject(self, reason: str):
        self.rejected += 1
        self.rejection_reasons[reason] = self.rejection_reasons.get(reason, 0) + 1

    def as_dict(self) -> dict:
        return {
            "seen": self.seen,
            "parsed": self.parsed,
            "rejected": self.rejected,
            "encoded": self.encoded,
            "loaded": self.loaded,
            "rejection_reasons": dict(self.rejection_reasons),
            "wall_time_s": round(self.wall_time_s, 3),
        }


def parse_publication_record(line: str, corpus: str = "semanticscholar"):
    """One JSONL line -> Document, or a rejection reason string."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError:
        return "MalformedJson"
    if not isinstance(obj, dict) or not obj.get("id"):
        return "MalformedJson"
    title = (obj.get("title") or "").strip()
    abstract = (obj.get("abstract") or "").strip()
    if not title and not abstract:
        return "no text"
    parts = []
    if title:
        parts.append(DocumentPart("title", title))
    if abstract:
        parts.append(DocumentPart("abstract", abstract))
    metadata = {}
    for key in ("year", "journal", "doi"):
        if obj.get(key) not in (None, ""):
            metadata[key] = str(obj[key])
    authors = obj.get("authors")
    if authors:
        metadata["authors"] = "; ".join(str(a) for a in authors)
    return Document(str(obj["id"]), corpus, tuple(parts), metadata)


def parse_patent_document(xml_text: str, corpus: str):
    """One patent XML document -> Document, or a rejection reason string."""
    assert corpus in PATENT_CORPORA
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError:
        return "MalformedXml"
    if root.tag != "patent-document" or not root.get("pub-number"):
        return "MalformedXml"
    parts = []
    for key in ("title", "abstract", "claims", "description"):
        node = root.find(key)
        if node is not None and (node.text or "").strip():
            parts.append(DocumentPart(key, node.text.strip()))
    if not parts:
        return "no text"
    metadata = {}
    for attr in ("country", "kind", "date"):
        if root.get(attr):
            metadata[attr] = root.get(attr)
    classes = [n.text.strip() for n in root.findall("classification") if (n.text or "").strip()]
    if classes:
        metadata["classifications"] = "; ".join(classes)
    return Document(root.get("pub-number"), corpus, tuple(parts), metadata)


def _parse_file(spec: SourceSpec, path: Path, report: PipelineReport) -> list[Document]:
    docs = []
    if spec.format == "publication_jsonl":
        for line in path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            report.seen += 1
            result = parse_publication_record(line, spec.corpus)
            if isinstance(result, Document):
                report.parsed += 1
                docs.append(result)
            else:
                report.reject(result)
    else:
        report.seen += 1
        result = parse_patent_document(path.read_text(encoding="utf-8"), spec.corpus)
        if isinstance(result, Document):
            report.parsed += 1
            docs.append(result)
        else:
            report.reject(result)
    return docs


def _input_files(spec: SourceSpec) -> list[Path]:
    if not spec.location.exists():
        raise SourceUnreadable(f"source location {spec.location} does not exist")
    if spec.location.is_file():
        return [spec.location]
    pattern = "*.jsonl" if spec.format == "publication_jsonl" else "*.xml"
    return sorted(spec.location.glob(pattern), key=lambda p: (p.stat().st_mtime_ns, p.name))


def _encode_doc(doc: Document, engine: Engine):
    req = EncodeRequest(doc.id, tuple(p for p in doc.parts if p.key in ("title", "abstract")))
    if not req.parts:
        req = EncodeRequest(doc.id, doc.parts)
    return encode(req, engine.encoder_cfg)


def _load_docs(docs: list[Document], engine: Engine, report: PipelineReport, workers: int):
    def encode_one(doc):
        try:
            return _encode_doc(doc, engine)
        except (EmptyDocument, AllWordsFiltered) as exc:
            return exc.code

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            encoded = list(pool.map(encode_one, docs))
    else:
        encoded = [encode_one(d) for d in docs]
    for doc, emb in zip(docs, encoded):
        if isinstance(emb, str):
            # No encodable text; document is stored without entering the ANN index.
            engine.load_document(doc)
            report.loaded += 1
            continue
        report.encoded += 1
        engine.load_document(
            Document(doc.id, doc.corpus, doc.parts, doc.metadata, emb)
        )
        report.loaded += 1


def run_pipeline(spec: SourceSpec, engine: Engine, workers: int = 1) -> PipelineReport:
    """Full extract/encode/load over every input file. Re-runs upsert, never duplicate."""
    start = time.monotonic()
    report = PipelineReport()
    for path in _input_files(spec):
        docs = _parse_file(spec, path, report)
        _load_docs(docs, engine, report, workers)
    report.wall_time_s = time.monotonic() - start
    return report


def _file_marker(path: Path) -> str:
    return f"{path.stat().st_mtime_ns}:{path.name}"


def _marker_key(marker: str) -> tuple[int, str]:
    mtime, _, name = marker.partition(":")
    return (int(mtime), name)


def incremental_update(
    spec: SourceSpec, engine: Engine, watermark: str = "", workers: int = 1
) -> tuple[PipelineReport, str]:
    """Process only files newer than the watermark; returns the advanced marker."""
    start = time.monotonic()
    report = PipelineReport()
    files = _input_files(spec)
    floor = _marker_key(watermark) if watermark else None
    new_mark = watermark
    for path in files:
        marker = _file_marker(path)
        if floor is not None and _marker_key(marker) <= floor:
            continue
        docs = _parse_file(spec, path, report)
        _load_docs(docs, engine, report, workers)
        if not new_mark or _marker_key(marker) > _marker_key(new_mark):
            new_mark = marker
    report.wall_time_s = time.monotonic() - start
    return report, new_mark


def watermark_path(store_root, corpus: str) -> Path:
    # Dot-prefixed so the store loader never mistakes it for a corpus directory.
    return Path(store_root) / ".etl" / f"{corpus}.watermark"


def read_watermark(store_root, corpus: str) -> str:
    path = watermark_path(store_root, corpus)
    return path.read_text().strip() if path.exists() else ""


def write_watermark(store_root, corpus: str, marker: str) -> None:
    path = watermark_path(store_root, corpus)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(marker)
