"""Similarity and distance primitives shared by every metric.

Determinism contract: Euclidean distances accumulate squared coordinate
differences in index order, one float64 add per coordinate, so a plain
per-pair Python loop reproduces the vectorized result bit-for-bit. Callers
pass rows pre-sorted by record id; reductions then agree across runs and
across sharding strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimMismatchError, TooFewRowsError, ZeroVectorError


class SimilarityKind(Enum):
    COSINE = "cosine"
    NEG_EUCLIDEAN = "neg_euclidean"


def _as_f64(v) -> np.ndarray:
    return np.asarray(v, dtype=np.float64)


def _sq_norms(x: np.ndarray) -> np.ndarray:
    acc = np.zeros(x.shape[0])
    for d in range(x.shape[1]):
        acc += x[:, d] * x[:, d]
    return acc


def unit_rows(rows) -> np.ndarray:
    """Rows scaled to unit norm; any zero row raises ZeroVector."""
    x = np.atleast_2d(_as_f64(rows))
    norms = np.sqrt(_sq_norms(x))
    if np.any(norms == 0.0):
        idx = int(np.nonzero(norms == 0.0)[0][0])
        raise ZeroVectorError(f"row {idx} has zero norm; cosine undefined")
    return x / norms[:, None]


def _dot_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    acc = np.zeros((x.shape[0], y.shape[0]))
    for d in range(x.shape[1]):
        acc += x[:, d, None] * y[None, :, d]
    return acc


def euclidean_matrix(x, y) -> np.ndarray:
    """All-pairs Euclidean distances, coordinate-ordered accumulation.

    dist[i, j] == sqrt(sum_d (x[i,d]-y[j,d])^2) with the sum taken in
    coordinate order, matching a naive scalar loop exactly. The same holds
    for every accumulation in this module: vectorization runs across pairs,
    never across coordinates, so scalar oracles reproduce results bitwise.
    """
    x = np.atleast_2d(_as_f64(x))
    y = np.atleast_2d(_as_f64(y))
    if x.shape[1] != y.shape[1]:
        raise DimMismatchError(f"{x.shape[1]} vs {y.shape[1]}")
    acc = np.zeros((x.shape[0], y.shape[0]))
    for d in range(x.shape[1]):
        diff = x[:, d, None] - y[None, :, d]
        acc += diff * diff
    return np.sqrt(acc)


def similarity(a, b, kind: SimilarityKind = SimilarityKind.COSINE) -> float:
    """Scalar similarity. Cosine lies in [-1, 1]; NegEuclidean is <= 0."""
    a = _as_f64(a).ravel()
    b = _as_f64(b).ravel()
    if a.shape != b.shape:
        raise DimMismatchError(f"{a.shape} vs {b.shape}")
    if kind is SimilarityKind.COSINE:
        return float(cosine_matrix(a[None, :], b[None, :])[0, 0])
    dist = float(euclidean_matrix(a[None, :], b[None, :])[0, 0])
    return -dist


def cosine_matrix(x, y=None) -> np.ndarray:
    """All-pairs cosine similarities, clipped to [-1, 1].

    With y omitted the result is made exactly symmetric by mirroring the
    upper triangle (each unordered pair computed once).
    """
    ux = unit_rows(x)
    if y is None:
        m = _dot_matrix(ux, ux)
        iu = np.triu_indices(m.shape[0], k=1)
        m[(iu[1], iu[0])] = m[iu]
        return np.clip(m, -1.0, 1.0)
    uy = unit_rows(y)
    if ux.shape[1] != uy.shape[1]:
        raise DimMismatchError(f"{ux.shape[1]} vs {uy.shape[1]}")
    return np.clip(_dot_matrix(ux, uy), -1.0, 1.0)


def pairwise_matrix(rows, kind: SimilarityKind = SimilarityKind.COSINE) -> np.ndarray:
    """Symmetric all-pairs similarity matrix; diagonal is self-similarity."""
    arr = _as_f64(rows)
    if arr.size == 0:
        raise TooFewRowsError("need at least one row")
    x = np.atleast_2d(arr)
    if kind is SimilarityKind.COSINE:
        m = cosine_matrix(x)
        np.fill_diagonal(m, 1.0)  # self-similarity is exactly 1 by definition
        return m
    d = euclidean_matrix(x, x)
    m = -d
    iu = np.triu_indices(m.shape[0], k=1)
    m[(iu[1], iu[0])] = m[iu]
    np.fill_diagonal(m, 0.0)
    return m


@dataclass(frozen=True)
class KnnRadii:
    """Per-row distance to the k-th nearest other row (self excluded)."""

    k: int
    radii: np.ndarray

    def __len__(self) -> int:
        return len(self.radii)


def knn_radii(rows, k: int) -> KnnRadii:
    """Exact k-th-neighbor radii. Requires more rows than k."""
    x = np.atleast_2d(_as_f64(rows))
    n = x.shape[0]
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if n <= k:
        raise TooFewRowsError(f"need more than k={k} rows, got {n}")
    dist = euclidean_matrix(x, x)
    # Exclude self by dropping column i from row i, then take the k-th smallest.
    radii = np.empty(n)
    for i in range(n):
        others = np.delete(dist[i], i)
        radii[i] = np.partition(others, k - 1)[k - 1]
    return KnnRadii(k=k, radii=radii)


def within_manifold(query, anchors, radii: KnnRadii) -> bool:
    """True iff the query lies inside any anchor's k-NN ball (boundary inclusive)."""
    q = _as_f64(query).ravel()
    a = np.atleast_2d(_as_f64(anchors))
    if a.shape[0] != len(radii.radii):
        raise ValueError("anchors and radii length differ")
    d = euclidean_matrix(q[None, :], a)[0]
    return bool(np.any(d <= radii.radii))


def membership_matrix(queries, anchors, radii: KnnRadii) -> np.ndarray:
    """Boolean (n_anchors, n_queries) matrix: query j inside anchor i's ball."""
    q = np.atleast_2d(_as_f64(queries))
    a = np.atleast_2d(_as_f64(anchors))
    d = euclidean_matrix(a, q)
    return d <= radii.radii[:, None]
