"""Executes parsed, variable-bound operations against an Engine and projects
the response down to exactly the requested selection set."""

from __future__ import annotations

from typing import Any, Optional

from .. import metrics
from ..encoder import EncodeRequest, encode, encode_batch
from ..engine import Engine
from ..errors import (
    DuplicateId,
    EmptyDocument,
    EmptyInput,
    MissingEmbedding,
    NotFound,
    TypeMismatch,
    UnknownIndex,
)
from ..model import (
    Document,
    DocumentPart,
    SimilarityMetric,
    corpus_to_index,
    document_to_json,
)
from .parser import Field
from .schema import PART_FIELDS

DEFAULT_K = 10


# -- projection -------------------------------------------------------------


def _project_parts(parts: list[dict], selections: list[Field]) -> list[dict]:
    names = [f.name for f in selections]
    part_keys = [n for n in names if n not in ("key", "value")]
    props = [n for n in names if n in ("key", "value")]
    if part_keys:
        parts = [p for p in parts if p["key"] in part_keys]
    if not props:
        props = ["key", "value"]
    return [{k: p[k] for k in props} for p in parts]


def _project_obj(obj: dict, selections: list[Field]) -> dict:
    out = {}
    for f in selections:
        value = obj.get(f.name)
        if f.name == "documentParts" and value is not None:
            out[f.name] = _project_parts(value, f.selections)
        else:
            out[f.name] = value if value is not None else None
    return out


def project(result: Any, selections: list[Field]) -> Any:
    if not selections:
        return result
    if isinstance(result, list):
        return [project(item, selections) for item in result]
    if result is None:
        return None
    return _project_obj(result, selections)


# -- helpers ----------------------------------------------------------------


def _doc_json(doc: Document) -> dict:
    return document_to_json(doc)


def _encode_request(data: dict, fallback_id: str = "query") -> EncodeRequest:
    if not isinstance(data, dict):
        raise TypeMismatch("data must be an object with id and parts")
    parts = tuple(
        DocumentPart(str(p.get("key", "")), str(p.get("value", "")))
        for p in data.get("parts", [])
    )
    if not parts:
        raise EmptyDocument("no parts provided")
    return EncodeRequest(str(data.get("id") or fallback_id), parts)


def _stored_embedding(engine: Engine, index: str, doc_id: str):
    corpus = engine.resolve_index(index)
    doc = engine.store.get(corpus, doc_id)
    if doc is None:
        raise NotFound(f"document {doc_id!r} not found in {index}")
    if doc.embedding is None:
        raise MissingEmbedding(f"document {doc_id!r} in {index} has no embedding")
    return doc


def _hits_json(engine: Engine, hits) -> list[dict]:
    out = []
    for h in hits:
        doc = engine.store.get(h.corpus, h.id)
        obj = _doc_json(doc) if doc is not None else {"id": h.id, "index": corpus_to_index(h.corpus)}
        obj["score"] = h.score
        out.append(obj)
    return out


def _matrix_json(matrix: metrics.SimilarityMatrix) -> dict:
    return {
        "sourceIds": list(matrix.source_ids),
        "targetIds": list(matrix.target_ids),
        "metric": matrix.metric.value,
        "values": [[float(v) for v in row] for row in matrix.values],
    }


# -- the nine operations ----------------------------------------------------


def op_document(engine: Engine, args: dict) -> dict:
    corpus = engine.resolve_index(args["index"])
    doc = engine.store.get(corpus, args["id"])
    if doc is None:
        raise NotFound(f"document {args['id']!r} not found in {args['index']}")
    return _doc_json(doc)


def op_documents(engine: Engine, args: dict) -> list:
    keys = args.get("keys")
    if keys is None:
        # Appendix form: look the keyword up as an id within one index.
        index = args.get("index")
        keyword = args.get("keyword")
        if index is None or keyword is None:
            raise TypeMismatch("Documents requires either keys or index+keyword")
        keys = [{"index": index, "id": keyword}]
    out = []
    for key in keys:
        corpus = engine.resolve_index(key["index"])
        doc = engine.store.get(corpus, key["id"])
        out.append(_doc_json(doc) if doc is not None else None)
    return out


def op_search_documents(engine: Engine, args: dict) -> list:
    corpus = engine.resolve_index(args["index"])
    k = args.get("k") or DEFAULT_K
    hits = engine.fulltext.search_keyword(args["keyword"], corpus, k)
    out = []
    for h in hits:
        obj = _doc_json(engine.store.get(h.corpus, h.id))
        obj["score"] = h.score
        out.append(obj)
    return out


def op_encode_document(engine: Engine, args: dict) -> list:
    emb = encode(_encode_request(args["data"]), engine.encoder_cfg)
    return [float(x) for x in emb]


def op_encode_documents(engine: Engine, args: dict) -> list:
    reqs = [_encode_request(d, f"doc{i}") for i, d in enumerate(args["data"])]
    encoded, failures = encode_batch(reqs, engine.encoder_cfg)
    if failures:
        raise EmptyDocument(f"documents failed to encode: {sorted(failures)}")
    return [{"id": doc_id, "vector": [float(x) for x in emb]} for doc_id, emb in encoded]


def _parse_metric(args: dict) -> SimilarityMetric:
    return SimilarityMetric.parse(args.get("metric") or "cosine")


def op_similarity_calculation(engine: Engine, args: dict) -> dict:
    metric = _parse_metric(args)
    sources = [_stored_embedding(engine, k["index"], k["id"]) for k in args["sources"]]
    targets = [_stored_embedding(engine, k["index"], k["id"]) for k in args["targets"]]
    if not sources or not targets:
        raise EmptyInput("sources and targets must be non-empty")
    matrix = metrics.pairwise(
        [d.embedding for d in sources],
        [d.embedding for d in targets],
        metric,
        source_ids=[d.id for d in sources],
        target_ids=[d.id for d in targets],
    )
    return _matrix_json(matrix)


def op_encode_and_similarity(engine: Engine, args: dict) -> dict:
    metric = _parse_metric(args)
    reqs = [_encode_request(d, f"doc{i}") for i, d in enumerate(args["data"])]
    ids = [r.id for r in reqs]
    if len(set(ids)) != len(ids):
        raise DuplicateId("encode ids must be distinct")
    embs = [encode(r, engine.encoder_cfg) for r in reqs]
    matrix = metrics.pairwise(embs, embs, metric, source_ids=ids, target_ids=ids)
    return _matrix_json(matrix)


def op_similarity_search(engine: Engine, args: dict) -> list:
    source_index = args["index"]
    doc = _stored_embedding(engine, source_index, args["id"])
    target_index = args.get("targetIndex") or source_index
    target_corpus = engine.resolve_index(target_index)
    k = args.get("k") or DEFAULT_K
    idx = engine.ann.get(target_corpus)
    if idx is None or len(idx) == 0:
        return []
    same_index = target_corpus == doc.corpus
    hits = idx.search(doc.embedding, k + (1 if same_index else 0))
    if same_index:
        hits = [h for h in hits if h.id != doc.id][:k]
    return _hits_json(engine, hits)


def op_embed_and_search(engine: Engine, args: dict) -> list:
    emb = encode(_encode_request(args["data"]), engine.encoder_cfg)
    target_corpus = engine.resolve_index(args["targetIndex"])
    k = args.get("k") or DEFAULT_K
    idx = engine.ann.get(target_corpus)
    if idx is None or len(idx) == 0:
        return []
    return _hits_json(engine, idx.search(emb, k))


HANDLERS = {
    "Document": op_document,
    "Documents": op_documents,
    "searchDocuments": op_search_documents,
    "encodeDocument": op_encode_document,
    "encodeDocuments": op_encode_documents,
    "similarityCalculation": op_similarity_calculation,
    "encodeDocumentAndSimilarityCalculation": op_encode_and_similarity,
    "SimilaritySearch": op_similarity_search,
    "embedDocumentAndSimilaritySearch": op_embed_and_search,
}


def execute(engine: Engine, operation: Field) -> Any:
    from .schema import OPERATIONS

    for arg, (_, required) in OPERATIONS[operation.name]["args"].items():
        if required and operation.args.get(arg) is None:
            raise TypeMismatch(f"operation {operation.name} requires argument {arg!r}")
    handler = HANDLERS[operation.name]
    result = handler(engine, operation.args)
    return project(result, operation.selections)
