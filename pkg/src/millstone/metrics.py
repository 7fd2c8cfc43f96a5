"""Distance and similarity functions: cosine similarity, L1 and L2 distance.

Cosine is reported as a similarity (higher = closer); l1/l2 are distances
(lower = closer). Endpoints returning ranked results order accordingly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyInput, ZeroVector
from .model import SimilarityMetric


@dataclass(frozen=True)
class SimilarityMatrix:
    source_ids: tuple[str, ...]
    target_ids: tuple[str, ...]
    values: np.ndarray  # shape (|sources|, |targets|), row-major
    metric: SimilarityMetric

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        assert vals.shape == (len(self.source_ids), len(self.target_ids))
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "source_ids", tuple(self.source_ids))
        object.__setattr__(self, "target_ids", tuple(self.target_ids))


def _check_dims(a: np.ndarray, b: np.ndarray):
    if a.shape != b.shape:
        raise DimensionMismatch(f"embedding dimensions differ: {a.shape[-1]} vs {b.shape[-1]}")


def cosine(a, b) -> float:
    """Dot product over the product of norms. Undefined (ZeroVector) on a zero norm."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    na = float(np.sqrt(np.dot(a, a)))
    nb = float(np.sqrt(np.dot(b, b)))
    if na == 0.0 or nb == 0.0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    return float(np.dot(a, b)) / (na * nb)


def l1(a, b) -> float:
    """Manhattan distance: sum of absolute component differences."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    return float(np.sum(np.abs(a - b)))


def l2(a, b) -> float:
    """Euclidean distance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    _check_dims(a, b)
    d = b - a
    return float(np.sqrt(np.sum(d * d)))


_SCALAR = {
    SimilarityMetric.COSINE: cosine,
    SimilarityMetric.L1: l1,
    SimilarityMetric.L2: l2,
}


def metric_fn(metric: SimilarityMetric):
    return _SCALAR[metric]


def pairwise(
    sources,
    targets,
    metric: SimilarityMetric,
    source_ids=None,
    target_ids=None,
) -> SimilarityMatrix:
    """All-pairs metric values; row i / column j is metric(sources[i], targets[j]).

    Computed by looping the scalar op so the matrix is bit-identical to nested
    scalar calls.
    """
    sources = [np.asarray(s, dtype=np.float64) for s in sources]
    targets = [np.asarray(t, dtype=np.float64) for t in targets]
    if not sources or not targets:
        raise EmptyInput("pairwise requires non-empty source and target lists")
    fn = _SCALAR[metric]
    values = np.empty((len(sources), len(targets)), dtype=np.float64)
    for i, s in enumerate(sources):
        for j, t in enumerate(targets):
            values[i, j] = fn(s, t)
    if source_ids is None:
        source_ids = tuple(str(i) for i in range(len(sources)))
    if target_ids is None:
        target_ids = tuple(str(j) for j in range(len(targets)))
    return SimilarityMatrix(tuple(source_ids), tuple(target_ids), values, metric)
