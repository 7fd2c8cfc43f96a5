"""Text-to-embedding encoding.

Two interchangeable backends behind one contract (fixed output dimension,
bounded input tokens, determinism):

* ``hashing`` — local signed feature hashing over word tokens, L2-normalized.
  No corpus-global state: adding new documents never changes the embedding of
  any other document.
* ``remote`` — JSON client for an external model server that returns vectors
  of the configured dimension.
"""

from __future__ import annotations

import math
import os
import re
import threading
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import (
    AllWordsFiltered,
    DuplicateId,
    EmptyDocument,
    RemoteBadResponse,
    RemoteUnavailable,
)
from .model import PART_KEYS, DocumentPart

DEFAULT_DIM = 768
DEFAULT_TOKEN_LIMIT = 512
DEFAULT_TOKENS_PER_WORD = 1.2

_WORD_RE = re.compile(r"[a-z0-9]+")

ENCODER_URL_ENV = "MILLSTONE_ENCODER_URL"


@dataclass
class EncoderConfig:
    dim: int = DEFAULT_DIM
    token_limit: int = DEFAULT_TOKEN_LIMIT
    tokens_per_word: float = DEFAULT_TOKENS_PER_WORD
    hash_seed: int = 0
    backend: str = "hashing"  # "hashing" | "remote"
    url: Optional[str] = None
    timeout_ms: int = 5000
    max_in_flight: int = 4
    _gate: threading.Semaphore = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.dim < 1 or self.token_limit < 1 or self.tokens_per_word <= 0:
            raise ValueError("invalid encoder configuration")
        self._gate = threading.Semaphore(self.max_in_flight)

    def effective_url(self) -> Optional[str]:
        return os.environ.get(ENCODER_URL_ENV) or self.url


@dataclass(frozen=True)
class EncodeRequest:
    id: str
    parts: tuple[DocumentPart, ...]

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))


def word_tokenize(text: str) -> list[str]:
    """Lowercase, split on any non-alphanumeric run, drop empties."""
    return _WORD_RE.findall(text.lower())


def estimate_tokens(words: Sequence[str], cfg: EncoderConfig) -> int:
    return math.ceil(len(words) * cfg.tokens_per_word)


def truncate_to_budget(words: Sequence[str], cfg: EncoderConfig) -> list[str]:
    """Longest prefix whose token estimate fits cfg.token_limit."""
    n = min(len(words), int(cfg.token_limit / cfg.tokens_per_word))
    while n < len(words) and estimate_tokens(words[: n + 1], cfg) <= cfg.token_limit:
        n += 1
    while n > 0 and estimate_tokens(words[:n], cfg) > cfg.token_limit:
        n -= 1
    return list(words[:n])


_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1


def hash64(word: str, seed: int = 0) -> int:
    """FNV-1a over the UTF-8 bytes, with the seed folded into the offset basis."""
    h = (_FNV_OFFSET ^ (seed & _MASK64)) & _MASK64
    for byte in word.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def _request_words(req: EncodeRequest, cfg: EncoderConfig) -> list[str]:
    # Title has truncation priority: its words are consumed before the abstract's.
    by_key = {p.key: p.value for p in req.parts}
    ordered = [by_key[k] for k in PART_KEYS if k in by_key]
    ordered += [p.value for p in req.parts if p.key not in PART_KEYS]
    if all(not t.strip() for t in ordered):
        raise EmptyDocument(f"document {req.id!r} has no non-empty parts")
    words: list[str] = []
    for text in ordered:
        words.extend(word_tokenize(text))
    if not words:
        raise AllWordsFiltered(f"document {req.id!r} tokenized to zero words")
    return truncate_to_budget(words, cfg)


def encode(req: EncodeRequest, cfg: Optional[EncoderConfig] = None) -> np.ndarray:
    """Deterministic signed feature hashing: bucket by hash64 mod dim, sign from
    hash bit 63, then L2-normalize. Same input, same config: bit-identical output."""
    cfg = cfg or EncoderConfig()
    words = _request_words(req, cfg)
    components = np.zeros(cfg.dim, dtype=np.float64)
    for w in words:
        h = hash64(w, cfg.hash_seed)
        bucket = h % cfg.dim
        sign = 1.0 if (h >> 63) == 0 else -1.0
        components[bucket] += sign
    norm = float(np.sqrt(np.dot(components, components)))
    if norm == 0.0:
        # Signs can cancel exactly; fall back to unsigned counts so the output
        # is still a valid unit vector for the same word multiset.
        for w in words:
            components[hash64(w, cfg.hash_seed) % cfg.dim] += 1.0
        norm = float(np.sqrt(np.dot(components, components)))
    return components / norm


def encode_batch(
    reqs: Sequence[EncodeRequest], cfg: Optional[EncoderConfig] = None
) -> tuple[list[tuple[str, np.ndarray]], dict[str, str]]:
    """Encode each request in order. Per-item failures are collected by id and
    do not fail the batch; duplicate ids do."""
    cfg = cfg or EncoderConfig()
    seen = set()
    for r in reqs:
        if r.id in seen:
            raise DuplicateId(f"duplicate encode id {r.id!r}")
        seen.add(r.id)
    out: list[tuple[str, np.ndarray]] = []
    failures: dict[str, str] = {}
    for r in reqs:
        try:
            out.append((r.id, encode(r, cfg)))
        except (EmptyDocument, AllWordsFiltered) as exc:
            failures[r.id] = exc.code
    return out, failures


def remote_encode(
    reqs: Sequence[EncodeRequest], cfg: EncoderConfig
) -> list[tuple[str, np.ndarray]]:
    """POST the batch to the configured model server and validate the reply."""
    import httpx

    url = cfg.effective_url()
    if not url:
        raise RemoteUnavailable("no encoder URL configured")
    payload = {
        "documents": [
            {"id": r.id, "parts": [{"key": p.key, "value": p.value} for p in r.parts]}
            for r in reqs
        ]
    }
    with cfg._gate:
        try:
            resp = httpx.post(url, json=payload, timeout=cfg.timeout_ms / 1000.0)
        except httpx.HTTPError as exc:
            raise RemoteUnavailable(f"encoder server unreachable: {exc}") from exc
    if resp.status_code != 200:
        raise RemoteBadResponse(f"encoder server returned HTTP {resp.status_code}")
    try:
        body = resp.json()
        embeddings = body["embeddings"]
        out = []
        for item in embeddings:
            vec = np.asarray(item["vector"], dtype=np.float64)
            out.append((str(item["id"]), vec))
    except (KeyError, TypeError, ValueError) as exc:
        raise RemoteBadResponse(f"malformed encoder response: {exc}") from exc
    for doc_id, vec in out:
        if vec.ndim != 1 or len(vec) != cfg.dim:
            raise RemoteBadResponse(
                f"embedding for {doc_id!r} has dimension {vec.size}, expected {cfg.dim}"
            )
        if not np.all(np.isfinite(vec)):
            raise RemoteBadResponse(f"embedding for {doc_id!r} has non-finite values")
    return out
