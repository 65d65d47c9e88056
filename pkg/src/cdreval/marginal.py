"""Pooled metrics over real vs generated sets, prompt identity ignored.

Precision/recall/density/coverage use k-NN balls around one set to decide
membership of the other (boundary inclusive, so identical sets score 1
exactly). Vendi is the exponentiated entropy of the cosine-kernel spectrum.
Counts are exact integers and the final division is a single float64 op, so
a scalar brute-force scan reproduces every value bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KernelNotPsdError, NonFiniteKernelError, TooFewRowsError
from .kernels import KnnRadii, SimilarityKind, knn_radii, membership_matrix, pairwise_matrix

PSD_TOLERANCE = 1e-10


@dataclass(frozen=True)
class MarginalInput:
    """Real and generated vectors (each sorted by record id) plus the manifold k."""

    real: np.ndarray
    generated: np.ndarray
    k: int = 3

    def __post_init__(self) -> None:
        object.__setattr__(self, "real", np.atleast_2d(np.asarray(self.real, dtype=np.float64)))
        object.__setattr__(self, "generated", np.atleast_2d(np.asarray(self.generated, dtype=np.float64)))
        if self.real.shape[0] == 0 or self.generated.shape[0] == 0:
            raise TooFewRowsError("real and generated sets must both be non-empty")


def _real_radii(inp: MarginalInput) -> KnnRadii:
    if inp.real.shape[0] <= inp.k:
        raise TooFewRowsError(f"need more than k={inp.k} real rows, got {inp.real.shape[0]}")
    return knn_radii(inp.real, inp.k)


def _generated_radii(inp: MarginalInput) -> KnnRadii:
    if inp.generated.shape[0] <= inp.k:
        raise TooFewRowsError(f"need more than k={inp.k} generated rows, got {inp.generated.shape[0]}")
    return knn_radii(inp.generated, inp.k)


def precision(inp: MarginalInput) -> float:
    """Fraction of generated samples inside the union of real k-NN balls."""
    member = membership_matrix(inp.generated, inp.real, _real_radii(inp))
    hits = int(member.any(axis=0).sum())
    return hits / inp.generated.shape[0]


def recall(inp: MarginalInput) -> float:
    """Fraction of real samples inside the union of generated k-NN balls."""
    member = membership_matrix(inp.real, inp.generated, _generated_radii(inp))
    hits = int(member.any(axis=0).sum())
    return hits / inp.real.shape[0]


def density(inp: MarginalInput) -> float:
    """Mean ball-count per generated sample, scaled by 1/k; unbounded above."""
    member = membership_matrix(inp.generated, inp.real, _real_radii(inp))
    total = int(member.sum())
    return total / (inp.k * inp.generated.shape[0])


def coverage(inp: MarginalInput) -> float:
    """Fraction of real anchors whose ball contains at least one generated sample."""
    member = membership_matrix(inp.generated, inp.real, _real_radii(inp))
    hits = int(member.any(axis=1).sum())
    return hits / inp.real.shape[0]


def vendi(rows, kind: SimilarityKind = SimilarityKind.COSINE) -> float:
    """Effective number of distinct samples: exp of the kernel-spectrum entropy.

    Eigenvalues of K/n sum to 1; 0*log(0) counts as 0. Tiny negative
    eigenvalues from solver roundoff are clipped; anything below the PSD
    tolerance means the kernel itself is broken and raises.
    """
    x = np.atleast_2d(np.asarray(rows, dtype=np.float64))
    n = x.shape[0]
    if n < 1:
        raise TooFewRowsError("vendi needs at least one row")
    kernel = pairwise_matrix(x, kind)
    if not np.all(np.isfinite(kernel)):
        raise NonFiniteKernelError("kernel has non-finite entries")
    eigenvalues = np.linalg.eigvalsh(kernel / n)
    if np.any(eigenvalues < -PSD_TOLERANCE):
        raise KernelNotPsdError(f"eigenvalue {eigenvalues.min():.3e} below -{PSD_TOLERANCE}")
    eigenvalues = np.clip(eigenvalues, 0.0, None)
    positive = eigenvalues[eigenvalues > 0.0]
    entropy = -float(np.sum(positive * np.log(positive)))
    return float(np.exp(entropy))


@dataclass(frozen=True)
class MarginalScores:
    precision: float
    recall: float
    density: float
    coverage: float
    vendi: float


def score_marginal(inp: MarginalInput) -> MarginalScores:
    return MarginalScores(
        precision=precision(inp),
        recall=recall(inp),
        density=density(inp),
        coverage=coverage(inp),
        vendi=vendi(inp.generated),
    )
