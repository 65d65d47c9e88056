"""Per-prompt metrics over one config's generated samples.

Consistency is the mean per-image fraction of true VQA verdicts. Diversity is
the mean pairwise similarity among same-prompt generations (published as
1 - mean so that larger means more diverse; the raw mean is retained).
Realism is the mean, over generations, of the best similarity to any real
image of the same prompt. Prompt-level scores aggregate by unweighted mean.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping, Optional, Sequence

import numpy as np

from .errors import (
    EmptyInputError,
    MissingPromptEmbeddingError,
    MissingVerdictsError,
    NeedAtLeastTwoSamplesError,
    NoRealReferencesError,
)
from .kernels import SimilarityKind, cosine_matrix, euclidean_matrix, pairwise_matrix


@dataclass(frozen=True)
class PromptBundle:
    """One prompt's generated and real rows for a single config.

    `candidates` is the full roster the generated rows were selected from;
    top-m filtering always reselects from it, which is what makes repeated
    filtering with the same percentage a no-op.
    """

    prompt_id: str
    generated: tuple[tuple[str, np.ndarray], ...]
    real: tuple[tuple[str, np.ndarray], ...] = ()
    prompt_embedding: Optional[np.ndarray] = None
    verdicts: Mapping[str, tuple[bool, ...]] = field(default_factory=dict)
    candidates: Optional[tuple[tuple[str, np.ndarray], ...]] = None

    def __post_init__(self) -> None:
        if not self.generated:
            raise EmptyInputError(f"{self.prompt_id}: bundle needs at least one generated row")
        if self.candidates is None:
            object.__setattr__(self, "candidates", self.generated)

    @property
    def n(self) -> int:
        return len(self.generated)

    def gen_matrix(self) -> np.ndarray:
        return np.asarray([v for _, v in self.generated], dtype=np.float64)

    def real_matrix(self) -> np.ndarray:
        return np.asarray([v for _, v in self.real], dtype=np.float64)


def make_bundle(
    prompt_id: str,
    generated: Sequence[tuple[str, np.ndarray]],
    real: Sequence[tuple[str, np.ndarray]] = (),
    prompt_embedding=None,
    verdicts: Mapping[str, Sequence[bool]] | None = None,
) -> PromptBundle:
    """Build a bundle with rows sorted ascending by record id."""
    gen = tuple(sorted(((r, np.asarray(v)) for r, v in generated), key=lambda t: t[0]))
    ref = tuple(sorted(((r, np.asarray(v)) for r, v in real), key=lambda t: t[0]))
    verd = {k: tuple(v) for k, v in (verdicts or {}).items()}
    emb = None if prompt_embedding is None else np.asarray(prompt_embedding, dtype=np.float64)
    return PromptBundle(prompt_id, gen, ref, emb, verd)


def consistency_dsg(bundle: PromptBundle) -> float:
    """Mean over images of the per-image fraction of true verdicts, in [0, 1]."""
    total = 0.0
    for record_id, _vec in bundle.generated:
        answers = bundle.verdicts.get(record_id, ())
        if not answers:
            raise MissingVerdictsError(f"{bundle.prompt_id}: record {record_id} has no verdicts")
        total += sum(answers) / len(answers)
    return total / bundle.n


def conditional_diversity(
    bundle: PromptBundle, kind: SimilarityKind = SimilarityKind.COSINE
) -> tuple[float, float]:
    """(raw mean pairwise similarity over ordered pairs j != i, 1 - raw).

    The ordered-pair mean equals twice the unordered sum divided by N^2 - N,
    which is how it is computed here.
    """
    n = bundle.n
    if n < 2:
        raise NeedAtLeastTwoSamplesError(f"{bundle.prompt_id}: N={n}")
    sim = pairwise_matrix(bundle.gen_matrix(), kind)
    iu = np.triu_indices(n, k=1)
    raw = 2.0 * float(sim[iu].sum()) / (n * n - n)
    return raw, 1.0 - raw


def conditional_realism(bundle: PromptBundle, kind: SimilarityKind = SimilarityKind.COSINE) -> float:
    """Mean over generated samples of the max similarity to any same-prompt real image."""
    if not bundle.real:
        raise NoRealReferencesError(f"{bundle.prompt_id}: no real references")
    gen = bundle.gen_matrix()
    real = bundle.real_matrix()
    if kind is SimilarityKind.COSINE:
        sim = cosine_matrix(real, gen)
    else:
        sim = -euclidean_matrix(real, gen)
    best = sim.max(axis=0)
    return float(best.sum() / bundle.n)


def clip_consistency(bundle: PromptBundle) -> float:
    """Mean cosine between the prompt embedding and each generated sample."""
    if bundle.prompt_embedding is None:
        raise MissingPromptEmbeddingError(bundle.prompt_id)
    sim = cosine_matrix(bundle.prompt_embedding[None, :], bundle.gen_matrix())[0]
    return float(sim.sum() / bundle.n)


@dataclass(frozen=True)
class PromptScores:
    """Per-prompt metric values; None marks a field the prompt could not provide."""

    prompt_id: str
    consistency: Optional[float] = None
    diversity_raw: Optional[float] = None
    diversity_score: Optional[float] = None
    realism: Optional[float] = None
    clip_consistency: Optional[float] = None


_FIELDS = ("consistency", "diversity_raw", "diversity_score", "realism", "clip_consistency")


@dataclass(frozen=True)
class ConditionalScores:
    """Unweighted cross-prompt means plus per-field coverage (present, total)."""

    per_prompt: tuple[PromptScores, ...]
    means: Mapping[str, float]
    coverage: Mapping[str, tuple[int, int]]


def score_bundle(
    bundle: PromptBundle,
    kind: SimilarityKind = SimilarityKind.COSINE,
    fields: Sequence[str] = _FIELDS,
) -> PromptScores:
    """Compute the requested per-prompt fields, leaving unavailable ones None.

    Structural gaps (no verdicts at all, a single sample, no real rows, no
    prompt embedding) yield None; partially missing verdicts still raise, as
    skipping records would bias the consistency mean.
    """
    values: dict[str, Optional[float]] = {}
    if "consistency" in fields:
        if any(bundle.verdicts.get(r) for r, _ in bundle.generated):
            values["consistency"] = consistency_dsg(bundle)
        else:
            values["consistency"] = None
    if "diversity_raw" in fields or "diversity_score" in fields:
        if bundle.n >= 2:
            raw, score = conditional_diversity(bundle, kind)
            values["diversity_raw"] = raw
            values["diversity_score"] = score
        else:
            values["diversity_raw"] = None
            values["diversity_score"] = None
    if "realism" in fields:
        values["realism"] = conditional_realism(bundle, kind) if bundle.real else None
    if "clip_consistency" in fields:
        values["clip_consistency"] = (
            clip_consistency(bundle) if bundle.prompt_embedding is not None else None
        )
    return PromptScores(prompt_id=bundle.prompt_id, **values)


def aggregate(per_prompt: Sequence[PromptScores]) -> ConditionalScores:
    """Unweighted mean per field over the prompts that provide it."""
    if not per_prompt:
        raise EmptyInputError("no prompts to aggregate")
    rows = tuple(sorted(per_prompt, key=lambda s: s.prompt_id))
    means: dict[str, float] = {}
    coverage: dict[str, tuple[int, int]] = {}
    for name in _FIELDS:
        present = [getattr(s, name) for s in rows if getattr(s, name) is not None]
        coverage[name] = (len(present), len(rows))
        if present:
            means[name] = float(sum(present) / len(present))
    return ConditionalScores(per_prompt=rows, means=means, coverage=coverage)


def refilter(bundle: PromptBundle, kept: Sequence[tuple[str, np.ndarray]]) -> PromptBundle:
    """Bundle with a new generated selection, preserving the candidate roster."""
    return replace(bundle, generated=tuple(kept), candidates=bundle.candidates)
