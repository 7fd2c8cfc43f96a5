"""Seeded synthetic embedding corpora for benchmarks and recall tests.

Document embeddings cluster by topic, so the generator mixes unit cluster
centers with scaled angular noise: ``v = sqrt(1 - a^2) * center + a * u``
with ``u`` a random unit vector. ``a`` controls how tight clusters are
(cosine to the center is about ``sqrt(1 - a^2)``).
"""

from __future__ import annotations

import numpy as np


def _unit_rows(mat: np.ndarray) -> np.ndarray:
    return mat / np.linalg.norm(mat, axis=1, keepdims=True)


def clustered_corpus(
    n: int,
    dim: int = 768,
    n_clusters: int = 100,
    noise: float = 0.45,
    seed: int = 42,
) -> tuple[np.ndarray, np.ndarray]:
    """Returns (vectors, cluster assignment); vectors are unit-normalized rows."""
    rng = np.random.default_rng(seed)
    centers = _unit_rows(rng.standard_normal((n_clusters, dim)))
    assign = rng.integers(0, n_clusters, n)
    noise_dirs = _unit_rows(rng.standard_normal((n, dim)))
    vectors = np.sqrt(1.0 - noise**2) * centers[assign] + noise * noise_dirs
    return _unit_rows(vectors), assign


def perturbed_queries(
    vectors: np.ndarray, n_queries: int, noise: float = 0.25, seed: int = 43
) -> np.ndarray:
    """Queries drawn near random corpus points (same topical structure)."""
    rng = np.random.default_rng(seed)
    picks = rng.integers(0, len(vectors), n_queries)
    dirs = _unit_rows(rng.standard_normal((n_queries, vectors.shape[1])))
    q = np.sqrt(1.0 - noise**2) * vectors[picks] + noise * dirs
    return _unit_rows(q)
