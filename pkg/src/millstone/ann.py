"""Approximate nearest-neighbor search over unit vectors.

A layered proximity graph: layer 0 holds every node, higher layers hold an
exponentially thinning subset and provide long-range hops. Vectors are stored
unit-normalized so cosine similarity reduces to a dot product; the graph is
cosine-only by design. An exhaustive scan (`exact_search`) serves as the
correctness oracle.
"""

from __future__ import annotations

import heapq
import io
import math
import struct
import threading
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    CorruptSnapshot,
    DimensionMismatch,
    DuplicateId,
    EmptyIndex,
    NotNormalized,
    UnknownId,
    VersionMismatch,
)

SNAPSHOT_MAGIC = b"MLHNSW01"

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class HnswParams:
    m: int = 16
    m0: int = 32
    ef_construction: int = 200
    ef_search: int = 100
    ml: float = 0.0  # 0 means "use 1/ln(m)"
    rng_seed: int = 0

    def __post_init__(self):
        if self.m < 2 or self.m0 < self.m or self.ef_construction < self.m or self.ef_search < 1:
            raise ValueError("invalid HNSW parameters")
        if self.ml == 0.0:
            object.__setattr__(self, "ml", 1.0 / math.log(self.m))
        if self.ml <= 0:
            raise ValueError("ml must be positive")


@dataclass(frozen=True)
class SearchHit:
    id: str
    score: float
    corpus: str = ""


def _check_query(q, dim: Optional[int]) -> np.ndarray:
    q = np.asarray(q, dtype=np.float64)
    if dim is not None and q.shape != (dim,):
        raise DimensionMismatch(f"query has dimension {q.size}, index expects {dim}")
    norm = float(np.sqrt(np.dot(q, q)))
    if abs(norm - 1.0) > _NORM_TOL:
        raise NotNormalized(f"vector norm is {norm}, expected 1.0")
    return q


def exact_search(items, q, k: int, corpus: str = "") -> list[SearchHit]:
    """Exhaustive top-k by cosine over (id, unit vector) pairs. Ties by id ascending."""
    if isinstance(items, dict):
        items = items.items()
    ids, vecs = [], []
    for doc_id, vec in items:
        ids.append(doc_id)
        vecs.append(np.asarray(vec, dtype=np.float64))
    if not ids:
        raise EmptyIndex("exact_search over an empty store")
    q = _check_query(q, len(vecs[0]))
    sims = np.asarray(vecs) @ q
    order = sorted(range(len(ids)), key=lambda i: (-sims[i], ids[i]))
    return [SearchHit(ids[i], float(sims[i]), corpus) for i in order[:k]]


class HnswIndex:
    """Insert/search/remove over an id-keyed set of unit vectors.

    Concurrency: many readers or one writer. A node becomes visible to
    searches only after all of its edges are in place.
    """

    def __init__(self, dim: int, params: Optional[HnswParams] = None, corpus: str = ""):
        self.dim = dim
        self.params = params or HnswParams()
        self.corpus = corpus
        self._rng = np.random.default_rng(self.params.rng_seed)
        self._draws = 0
        self._vectors = np.empty((0, dim), dtype=np.float64)
        self._vf32 = np.empty((0, dim), dtype=np.float32)  # traversal copy
        self._ids: list[Optional[str]] = []
        self._levels: list[int] = []
        self._adj: list[list[list[int]]] = []  # slot -> layer -> neighbor slots
        self._slot_of: dict[str, int] = {}
        self._free: list[int] = []
        self._entry: Optional[int] = None
        self._max_layer = -1
        self._write_lock = threading.Lock()

    def __len__(self) -> int:
        return len(self._slot_of)

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._slot_of

    def ids(self) -> list[str]:
        return list(self._slot_of)

    def vector(self, doc_id: str) -> np.ndarray:
        return self._vectors[self._slot_of[doc_id]]

    # -- level assignment ---------------------------------------------------

    def assign_level(self) -> int:
        """floor(-ln(u) * ml) for u uniform in (0, 1]."""
        u = 1.0 - self._rng.random()
        self._draws += 1
        return int(math.floor(-math.log(u) * self.params.ml))

    # -- graph search -------------------------------------------------------

    def _search_layer(self, q: np.ndarray, entries: list[tuple[float, int]], ef: int, layer: int):
        """Beam search on one layer; entries and result are (similarity, slot) pairs.

        Traversal similarities use the float32 copy of the vectors (half the
        memory traffic); callers recompute exact float64 scores as needed."""
        vectors = self._vf32
        adj = self._adj
        visited = bytearray(len(self._ids))
        for _, slot in entries:
            visited[slot] = 1
        cand = [(-sim, slot) for sim, slot in entries]
        heapq.heapify(cand)
        best = list(entries)
        heapq.heapify(best)
        while cand:
            neg_sim, slot = heapq.heappop(cand)
            if len(best) >= ef and -neg_sim < best[0][0]:
                break
            fresh = [n for n in adj[slot][layer] if not visited[n]]
            if not fresh:
                continue
            for n in fresh:
                visited[n] = 1
            sims = (vectors[fresh] @ q).tolist()
            full = len(best) >= ef
            for n, s in zip(fresh, sims):
                if not full or s > best[0][0]:
                    heapq.heappush(cand, (-s, n))
                    heapq.heappush(best, (s, n))
                    if len(best) > ef:
                        heapq.heappop(best)
                        full = True
        return best

    def _greedy(self, q: np.ndarray, layer: int, slot: int, sim: float) -> tuple[float, int]:
        """Hill-climb to the locally closest node on one layer (ef=1 descent step)."""
        vectors = self._vf32
        adj = self._adj
        while True:
            neigh = adj[slot][layer]
            if not neigh:
                return sim, slot
            sims = vectors[neigh] @ q
            i = int(np.argmax(sims))
            if sims[i] <= sim:
                return sim, slot
            sim = float(sims[i])
            slot = neigh[i]

    def _descend(self, q: np.ndarray, from_layer: int, to_layer: int) -> list[tuple[float, int]]:
        slot = self._entry
        sim = float(self._vf32[slot] @ q)
        for layer in range(from_layer, to_layer, -1):
            sim, slot = self._greedy(q, layer, slot, sim)
        return [(sim, slot)]

    # -- mutation -----------------------------------------------------------

    def _alloc(self, doc_id: str, vec: np.ndarray, level: int) -> int:
        if self._free:
            slot = self._free.pop()
            self._vectors[slot] = vec
            self._vf32[slot] = vec
            self._ids[slot] = doc_id
            self._levels[slot] = level
            self._adj[slot] = [[] for _ in range(level + 1)]
            return slot
        if len(self._ids) == self._vectors.shape[0]:
            grow = max(64, self._vectors.shape[0])
            self._vectors = np.vstack([self._vectors, np.empty((grow, self.dim))])
            self._vf32 = np.vstack(
                [self._vf32, np.empty((grow, self.dim), dtype=np.float32)]
            )
        slot = len(self._ids)
        self._vectors[slot] = vec
        self._vf32[slot] = vec
        self._ids.append(doc_id)
        self._levels.append(level)
        self._adj.append([[] for _ in range(level + 1)])
        return slot

    def _cap(self, layer: int) -> int:
        return self.params.m0 if layer == 0 else self.params.m

    def _select_neighbors(self, candidates: list[tuple[float, int]], cap: int) -> list[int]:
        """Diversity-aware selection: take candidates in decreasing similarity,
        keeping one only if it is closer to the query than to every neighbor
        already kept; backfill with the closest rejects up to cap."""
        ranked = sorted(candidates, key=lambda t: (-t[0], self._ids[t[1]]))[: 3 * cap]
        slots = [c for _, c in ranked]
        sims_q = [s for s, _ in ranked]
        mat = self._vf32[slots]
        pair = mat @ mat.T  # candidate-to-candidate similarities, one matmul
        # kept_max[i]: highest similarity of candidate i to any kept neighbor.
        kept_max = np.full(len(slots), -np.inf)
        kept: list[int] = []
        rejected: list[int] = []
        for i in range(len(slots)):
            if len(kept) >= cap:
                break
            if kept_max[i] > sims_q[i]:
                rejected.append(i)
            else:
                kept.append(i)
                np.maximum(kept_max, pair[i], out=kept_max)
        # Backfill with the closest rejects only when diversity left the node
        # badly under-connected; a fully backfilled graph is denser but harder
        # to navigate.
        for i in rejected:
            if len(kept) >= max(2, cap // 4):
                break
            kept.append(i)
        return [slots[i] for i in kept]

    def _prune(self, slot: int, layer: int):
        cap = self._cap(layer)
        neigh = self._adj[slot][layer]
        if len(neigh) <= cap:
            return
        sims = (self._vf32[neigh] @ self._vf32[slot]).tolist()
        ranked = sorted(zip(sims, neigh), key=lambda t: (-t[0], self._ids[t[1]]))
        self._adj[slot][layer] = [n for _, n in ranked[:cap]]

    def insert(self, doc_id: str, vec) -> None:
        with self._write_lock:
            if doc_id in self._slot_of:
                raise DuplicateId(f"id {doc_id!r} already indexed")
            q = _check_query(vec, self.dim)
            level = self.assign_level()
            slot = self._alloc(doc_id, q, level)
            if self._entry is None:
                self._entry = slot
                self._max_layer = level
                self._slot_of[doc_id] = slot
                return
            q32 = q.astype(np.float32)
            cur = self._descend(q32, self._max_layer, min(level, self._max_layer))
            for layer in range(min(level, self._max_layer), -1, -1):
                found = self._search_layer(q32, cur, self.params.ef_construction, layer)
                chosen = self._select_neighbors(found, self._cap(layer))
                self._adj[slot][layer] = chosen
                for n in chosen:
                    self._adj[n][layer].append(slot)
                    self._prune(n, layer)
                cur = found
            if level > self._max_layer:
                self._entry = slot
                self._max_layer = level
            self._slot_of[doc_id] = slot  # publish last

    def remove(self, doc_id: str) -> None:
        with self._write_lock:
            slot = self._slot_of.pop(doc_id, None)
            if slot is None:
                raise UnknownId(f"id {doc_id!r} not in index")
            for layer, neigh in enumerate(self._adj[slot]):
                for n in neigh:
                    try:
                        self._adj[n][layer].remove(slot)
                    except ValueError:
                        pass
                # Patch the hole: link the orphaned neighbors among themselves
                # so layer connectivity survives the removal.
                for a in neigh:
                    if len(self._adj[a][layer]) >= self._cap(layer):
                        continue
                    others = [b for b in neigh if b != a and b not in self._adj[a][layer]]
                    if not others:
                        continue
                    sims = self._vectors[others] @ self._vectors[a]
                    b = max(zip(others, sims), key=lambda t: (t[1], self._ids[t[0]]))[0]
                    self._adj[a][layer].append(b)
                    self._adj[b][layer].append(a)
                    self._prune(b, layer)
            self._adj[slot] = []
            self._ids[slot] = None
            self._free.append(slot)
            if self._entry == slot:
                self._entry = None
                self._max_layer = -1
                for s in self._slot_of.values():
                    if self._levels[s] > self._max_layer:
                        self._max_layer = self._levels[s]
                        self._entry = s

    # -- queries ------------------------------------------------------------

    def search(self, q, k: int, ef: Optional[int] = None) -> list[SearchHit]:
        if self._entry is None:
            raise EmptyIndex("search over an empty index")
        q = _check_query(q, self.dim)
        beam = max(ef or self.params.ef_search, k)
        q32 = q.astype(np.float32)
        cur = self._descend(q32, self._max_layer, 0)
        found = self._search_layer(q32, cur, beam, 0)
        # Traversal ran in float32; report exact float64 scores.
        slots = [s for _, s in found]
        exact_sims = (self._vectors[slots] @ q).tolist()
        ranked = sorted(zip(exact_sims, slots), key=lambda t: (-t[0], self._ids[t[1]]))
        return [SearchHit(self._ids[s], sim, self.corpus) for sim, s in ranked[:k]]

    def exact(self, q, k: int) -> list[SearchHit]:
        """Brute-force oracle over this index's current contents."""
        return exact_search(
            ((doc_id, self._vectors[s]) for doc_id, s in self._slot_of.items()),
            q,
            k,
            self.corpus,
        )

    # -- invariant checking (used by tests) ---------------------------------

    def check_invariants(self) -> list[str]:
        problems = []
        live = set(self._slot_of.values())
        for doc_id, slot in self._slot_of.items():
            for layer, neigh in enumerate(self._adj[slot]):
                cap = self._cap(layer)
                if len(neigh) > cap:
                    problems.append(f"{doc_id}: layer {layer} degree {len(neigh)} > {cap}")
                for n in neigh:
                    if n not in live:
                        problems.append(f"{doc_id}: dangling edge on layer {layer}")
        if self._entry is not None:
            if self._levels[self._entry] != self._max_layer:
                problems.append("entry point not on max layer")
            # Layer 0 must be reachable from the entry point.
            seen = {self._entry}
            stack = [self._entry]
            while stack:
                s = stack.pop()
                for n in self._adj[s][0]:
                    if n not in seen:
                        seen.add(n)
                        stack.append(n)
            if seen != live:
                problems.append(f"layer 0 reachability: {len(seen)} of {len(live)} nodes")
        return problems

    # -- persistence --------------------------------------------------------

    def snapshot(self) -> bytes:
        """Little-endian, length-prefixed binary image of the whole graph."""
        out = io.BytesIO()
        out.write(SNAPSHOT_MAGIC)
        p = self.params
        out.write(
            struct.pack(
                "<IIIIdQId", p.m, p.m0, p.ef_construction, p.ef_search, p.ml, p.rng_seed,
                self.dim, 0.0,
            )
        )
        out.write(struct.pack("<Q", self._draws))
        corpus_b = self.corpus.encode("utf-8")
        out.write(struct.pack("<I", len(corpus_b)))
        out.write(corpus_b)
        slots = sorted(self._slot_of.values())
        slot_pos = {s: i for i, s in enumerate(slots)}
        out.write(struct.pack("<Iii", len(slots),
                              slot_pos.get(self._entry, -1) if self._entry is not None else -1,
                              self._max_layer))
        for s in slots:
            id_b = self._ids[s].encode("utf-8")
            out.write(struct.pack("<I", len(id_b)))
            out.write(id_b)
            out.write(struct.pack("<I", self._levels[s]))
            out.write(self._vectors[s].astype("<f8").tobytes())
        for s in slots:
            for layer in range(self._levels[s] + 1):
                neigh = self._adj[s][layer]
                out.write(struct.pack("<I", len(neigh)))
                out.write(struct.pack(f"<{len(neigh)}I", *(slot_pos[n] for n in neigh)))
        return out.getvalue()

    @classmethod
    def restore(cls, data: bytes) -> "HnswIndex":
        buf = io.BytesIO(data)

        def read(n: int) -> bytes:
            b = buf.read(n)
            if len(b) != n:
                raise CorruptSnapshot("truncated snapshot")
            return b

        magic = buf.read(len(SNAPSHOT_MAGIC))
        if len(magic) != len(SNAPSHOT_MAGIC) or magic[:6] != SNAPSHOT_MAGIC[:6]:
            raise CorruptSnapshot("bad magic bytes")
        if magic != SNAPSHOT_MAGIC:
            raise VersionMismatch(f"unsupported snapshot version {magic!r}")
        m, m0, efc, efs, ml, seed, dim, _ = struct.unpack("<IIIIdQId", read(44))
        (draws,) = struct.unpack("<Q", read(8))
        (corpus_len,) = struct.unpack("<I", read(4))
        corpus = read(corpus_len).decode("utf-8")
        count, entry_pos, max_layer = struct.unpack("<Iii", read(12))
        params = HnswParams(m=m, m0=m0, ef_construction=efc, ef_search=efs, ml=ml, rng_seed=seed)
        idx = cls(dim, params, corpus)
        for _ in range(draws):
            idx.assign_level()
        ids, levels, vecs = [], [], []
        for _ in range(count):
            (id_len,) = struct.unpack("<I", read(4))
            ids.append(read(id_len).decode("utf-8"))
            (level,) = struct.unpack("<I", read(4))
            levels.append(level)
            vecs.append(np.frombuffer(read(8 * dim), dtype="<f8").astype(np.float64))
        adj = []
        for i in range(count):
            layers = []
            for _ in range(levels[i] + 1):
                (n_neigh,) = struct.unpack("<I", read(4))
                neigh = list(struct.unpack(f"<{n_neigh}I", read(4 * n_neigh)))
                if any(n >= count for n in neigh):
                    raise CorruptSnapshot("edge references a missing node")
                layers.append(neigh)
            adj.append(layers)
        if buf.read(1):
            raise CorruptSnapshot("trailing bytes after snapshot")
        if count:
            idx._vectors = np.asarray(vecs, dtype=np.float64)
            idx._vf32 = idx._vectors.astype(np.float32)
            idx._ids = list(ids)
            idx._levels = levels
            idx._adj = adj
            idx._slot_of = {doc_id: i for i, doc_id in enumerate(ids)}
            if entry_pos < 0 or entry_pos >= count:
                raise CorruptSnapshot("entry point out of range")
            idx._entry = entry_pos
            idx._max_layer = max_layer
        return idx


def build_index(
    items: Iterable[tuple[str, Sequence[float]]],
    dim: int,
    params: Optional[HnswParams] = None,
    corpus: str = "",
) -> HnswIndex:
    idx = HnswIndex(dim, params, corpus)
    for doc_id, vec in items:
        idx.insert(doc_id, vec)
    return idx
