"""Metric functions against an independent naive-summation oracle."""

import math

import numpy as np
import pytest

from millstone.errors import DimensionMismatch, EmptyInput, ZeroVector
from millstone.metrics import SimilarityMatrix, cosine, l1, l2, metric_fn, pairwise
from millstone.model import SimilarityMetric


def oracle_cosine(a, b):
    dot = num_a = num_b = 0.0
    for x, y in zip(a, b):
        dot += x * y
        num_a += x * x
        num_b += y * y
    return dot / (math.sqrt(num_a) * math.sqrt(num_b))


def oracle_l1(a, b):
    total = 0.0
    for x, y in zip(a, b):
        total += abs(x - y)
    return total


def oracle_l2(a, b):
    total = 0.0
    for x, y in zip(a, b):
        total += (x - y) ** 2
    return math.sqrt(total)


def test_cosine_frozen_value():
    # Independently computed: dot=32, |a|=sqrt(14), |b|=sqrt(77).
    assert cosine([1, 2, 3], [4, 5, 6]) == pytest.approx(0.9746318461970762, rel=1e-15)


def test_l1_l2_frozen_values():
    assert l1([1, 2, 3], [4, 5, 6]) == 9.0
    assert l2([0, 3], [4, 0]) == 5.0


def test_against_oracle_random_pairs():
    rng = np.random.default_rng(7)
    for dim in (2, 3, 768):
        for _ in range(50):
            a = rng.standard_normal(dim)
            b = rng.standard_normal(dim)
            assert cosine(a, b) == pytest.approx(oracle_cosine(a, b), rel=1e-9)
            assert l1(a, b) == pytest.approx(oracle_l1(a, b), rel=1e-9)
            assert l2(a, b) == pytest.approx(oracle_l2(a, b), rel=1e-9)


def test_symmetry_and_scale_invariance():
    rng = np.random.default_rng(11)
    a = rng.standard_normal(32)
    b = rng.standard_normal(32)
    assert cosine(a, b) == pytest.approx(cosine(b, a), abs=1e-12)
    assert l1(a, b) == pytest.approx(l1(b, a), abs=1e-12)
    assert l2(a, b) == pytest.approx(l2(b, a), abs=1e-12)
    assert cosine(3.5 * a, b) == pytest.approx(cosine(a, b), abs=1e-12)


def test_cosine_bounds_and_self():
    rng = np.random.default_rng(13)
    v = rng.standard_normal(16)
    assert cosine(v, v) == pytest.approx(1.0, abs=1e-12)
    assert cosine(v, -v) == pytest.approx(-1.0, abs=1e-12)


def test_zero_vector_rejected():
    with pytest.raises(ZeroVector):
        cosine([0.0, 0.0], [1.0, 0.0])


def test_dimension_mismatch():
    for fn in (cosine, l1, l2):
        with pytest.raises(DimensionMismatch):
            fn([1.0, 2.0], [1.0, 2.0, 3.0])


def test_metric_fn_dispatch():
    assert metric_fn(SimilarityMetric.COSINE) is cosine
    assert metric_fn(SimilarityMetric.L1) is l1
    assert metric_fn(SimilarityMetric.L2) is l2


def test_pairwise_matches_scalar_calls():
    rng = np.random.default_rng(17)
    sources = [rng.standard_normal(8) for _ in range(3)]
    targets = [rng.standard_normal(8) for _ in range(4)]
    for metric in SimilarityMetric:
        mat = pairwise(sources, targets, metric)
        assert isinstance(mat, SimilarityMatrix)
        assert mat.values.shape == (3, 4)
        fn = metric_fn(metric)
        for i, s in enumerate(sources):
            for j, t in enumerate(targets):
                assert mat.values[i, j] == fn(s, t)  # bit-identical by contract


def test_pairwise_empty_rejected():
    with pytest.raises(EmptyInput):
        pairwise([], [np.ones(3)], SimilarityMetric.COSINE)


def test_pairwise_ids_default_and_explicit():
    mat = pairwise([np.ones(2)], [np.ones(2)], SimilarityMetric.L1)
    assert mat.source_ids == ("0",)
    mat = pairwise([np.ones(2)], [np.ones(2)], SimilarityMetric.L1,
                   source_ids=["a"], target_ids=["b"])
    assert (mat.source_ids, mat.target_ids) == (("a",), ("b",))
