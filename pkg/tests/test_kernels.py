import math

import numpy as np
import pytest

from cdreval.errors import DimMismatchError, TooFewRowsError, ZeroVectorError
from cdreval.kernels import (
    KnnRadii,
    SimilarityKind,
    cosine_matrix,
    euclidean_matrix,
    knn_radii,
    pairwise_matrix,
    similarity,
    unit_rows,
    within_manifold,
)


def scalar_distance(a, b):
    """Independent oracle: coordinate-ordered accumulation, one add per step."""
    s = 0.0
    for xa, xb in zip(a, b):
        d = float(xa) - float(xb)
        s += d * d
    return math.sqrt(s)


def scalar_cosine(a, b):
    na = math.sqrt(sum(float(x) * float(x) for x in a))
    nb = math.sqrt(sum(float(x) * float(x) for x in b))
    ua = [float(x) / na for x in a]
    ub = [float(x) / nb for x in b]
    s = 0.0
    for xa, xb in zip(ua, ub):
        s += xa * xb
    return min(1.0, max(-1.0, s))


def test_cosine_self_is_one():
    v = np.array([0.3, -1.7, 2.2])
    assert similarity(v, v) == pytest.approx(1.0, abs=1e-12)


def test_cosine_orthogonal_exact_zero():
    assert similarity([1.0, 0.0], [0.0, 1.0]) == 0.0


def test_cosine_half_sqrt_two():
    # closed form: cos = 1/sqrt(2)
    assert similarity([1.0, 1.0], [1.0, 0.0]) == pytest.approx(0.7071067811865476, abs=1e-9)


def test_cosine_dim_mismatch():
    with pytest.raises(DimMismatchError):
        similarity([1.0, 0.0], [1.0, 0.0, 0.0])


def test_cosine_zero_vector():
    with pytest.raises(ZeroVectorError):
        similarity([0.0, 0.0], [1.0, 0.0])


def test_neg_euclidean():
    assert similarity([1.0, 2.0], [1.0, 2.0], SimilarityKind.NEG_EUCLIDEAN) == 0.0
    val = similarity([0.0, 0.0], [3.0, 4.0], SimilarityKind.NEG_EUCLIDEAN)
    assert val == -5.0


def test_pairwise_single_row():
    m = pairwise_matrix([[2.0]], SimilarityKind.COSINE)
    assert m.shape == (1, 1) and m[0, 0] == 1.0


def test_pairwise_orthogonal_rows():
    m = pairwise_matrix([[1.0, 0.0], [0.0, 1.0]])
    assert np.array_equal(m, np.eye(2))


def test_pairwise_matches_scalar_loop(rng):
    rows = rng.normal(size=(7, 4))
    m = pairwise_matrix(rows)
    for i in range(7):
        for j in range(7):
            expected = 1.0 if i == j else scalar_cosine(rows[i], rows[j])
            assert m[i, j] == expected


def test_pairwise_exactly_symmetric(rng):
    rows = rng.normal(size=(13, 6))
    m = pairwise_matrix(rows)
    assert np.array_equal(m, m.T)
    d = pairwise_matrix(rows, SimilarityKind.NEG_EUCLIDEAN)
    assert np.array_equal(d, d.T)
    assert np.all(d <= 0) and np.array_equal(np.diag(d), np.zeros(13))


def test_euclidean_matrix_matches_scalar_loop(rng):
    x = rng.normal(size=(5, 11))
    y = rng.normal(size=(6, 11))
    d = euclidean_matrix(x, y)
    for i in range(5):
        for j in range(6):
            assert d[i, j] == scalar_distance(x[i], y[j])


def test_knn_radii_collinear():
    rows = [[0.0], [1.0], [3.0]]
    r = knn_radii(rows, k=1)
    assert list(r.radii) == [1.0, 1.0, 2.0]


def test_knn_radii_second_neighbor():
    rows = [[0.0], [1.0], [3.0]]
    r = knn_radii(rows, k=2)
    assert list(r.radii) == [3.0, 2.0, 3.0]


def test_knn_radii_too_few_rows():
    with pytest.raises(TooFewRowsError):
        knn_radii([[0.0], [1.0]], k=2)


def test_knn_radii_duplicates_zero():
    rows = [[1.0, 2.0], [1.0, 2.0], [5.0, 5.0]]
    r = knn_radii(rows, k=1)
    assert r.radii[0] == 0.0 and r.radii[1] == 0.0


def test_knn_radii_matches_sort_oracle(rng):
    rows = rng.normal(size=(20, 3))
    for k in (1, 3, 5):
        r = knn_radii(rows, k)
        for i in range(20):
            dists = sorted(scalar_distance(rows[i], rows[j]) for j in range(20) if j != i)
            assert r.radii[i] == dists[k - 1]


def test_knn_radii_permutation_invariant(rng):
    rows = rng.normal(size=(12, 4))
    base = knn_radii(rows, 3).radii
    perm = rng.permutation(12)
    permuted = knn_radii(rows[perm], 3).radii
    assert np.array_equal(permuted, base[perm])


def test_within_manifold_inclusive_boundary():
    anchors = [[0.0, 0.0], [10.0, 0.0]]
    radii = KnnRadii(k=1, radii=np.array([0.0, 1.0]))
    assert within_manifold([0.0, 0.0], anchors, radii)  # distance 0 <= radius 0
    assert not within_manifold([5.0, 0.0], anchors, radii)


def test_within_manifold_matches_scan(rng):
    anchors = rng.normal(size=(15, 3))
    radii = knn_radii(anchors, 2)
    for _ in range(25):
        q = rng.normal(size=3) * 2
        expected = any(
            scalar_distance(q, anchors[i]) <= radii.radii[i] for i in range(len(anchors))
        )
        assert within_manifold(q, anchors, radii) == expected


def test_unit_rows_normalizes(rng):
    rows = rng.normal(size=(4, 6))
    u = unit_rows(rows)
    norms = np.sqrt((u * u).sum(axis=1))
    assert np.allclose(norms, 1.0, atol=1e-12)


def test_cosine_matrix_rectangular(rng):
    x = rng.normal(size=(3, 5))
    y = rng.normal(size=(4, 5))
    m = cosine_matrix(x, y)
    assert m.shape == (3, 4)
    for i in range(3):
        for j in range(4):
            assert m[i, j] == scalar_cosine(x[i], y[j])
