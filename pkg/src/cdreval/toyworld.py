"""Synthetic Gaussian world that makes the inference-time knobs executable.

Each prompt owns a conditional Gaussian; an unconditional Gaussian is shared.
Guidance mixes the two sample streams linearly (lam * conditional +
(1 - lam) * unconditional), so every moment is closed-form and the
consistency/diversity response to the guidance grid is analyzable. The
compression knob quantizes coordinates with step 2**(-bpp * budget) plus
half-step Gaussian dither. All randomness comes from counter-based streams
keyed by (seed, purpose, prompt), so samples are reproducible independent of
execution order, and different knob values reuse the same underlying draws.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .core import EmbeddingRowMeta, EmbeddingTable, KnobConfig, Role, VerdictLog
from .errors import MalformedJsonError, UnknownPromptError

DEFAULT_VERDICT_THRESHOLD = 0.5
DEFAULT_QUANT_BUDGET = 8.0


@dataclass(frozen=True)
class ToyPrompt:
    prompt_id: str
    mean: np.ndarray
    stddev: float
    group_id: Optional[str] = None


@dataclass(frozen=True)
class ToyWorld:
    dim: int
    prompts: tuple[ToyPrompt, ...]
    unconditional_mean: np.ndarray
    unconditional_stddev: float
    seed: int = 0
    verdict_threshold: float = DEFAULT_VERDICT_THRESHOLD
    quant_budget: float = DEFAULT_QUANT_BUDGET

    def __post_init__(self) -> None:
        if self.unconditional_stddev <= 0:
            raise ValueError("unconditional stddev must be > 0")
        for p in self.prompts:
            if p.stddev <= 0:
                raise ValueError(f"{p.prompt_id}: stddev must be > 0")
            if len(p.mean) != self.dim:
                raise ValueError(f"{p.prompt_id}: mean has wrong dim")

    def prompt(self, prompt_id: str) -> ToyPrompt:
        for p in self.prompts:
            if p.prompt_id == prompt_id:
                return p
        raise UnknownPromptError(prompt_id)


@dataclass(frozen=True)
class ToySample:
    vector: np.ndarray
    prompt_id: str
    lam: float
    index: int


def stream(seed: int, *parts: object) -> np.random.Generator:
    """Deterministic generator keyed by (seed, parts); order-independent use."""
    tag = "/".join([str(seed), *[str(p) for p in parts]])
    digest = hashlib.sha256(tag.encode("utf-8")).digest()
    key = np.frombuffer(digest[:16], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _base_draws(world: ToyWorld, prompt_id: str, n: int, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Conditional/unconditional standard-normal blocks shared by every lam."""
    z = stream(seed, "gen", prompt_id).normal(size=(2, n, world.dim))
    return z[0], z[1]


def sample_cfg(world: ToyWorld, prompt_id: str, lam: float, n: int, seed: int) -> list[ToySample]:
    """n guidance-mixed samples: lam * z_cond + (1 - lam) * z_uncond."""
    if lam < 0:
        raise ValueError(f"lam must be >= 0, got {lam}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    prompt = world.prompt(prompt_id)
    zc, zu = _base_draws(world, prompt_id, n, seed)
    cond = prompt.mean + prompt.stddev * zc
    uncond = world.unconditional_mean + world.unconditional_stddev * zu
    mixed = lam * cond + (1.0 - lam) * uncond
    return [ToySample(vector=mixed[i], prompt_id=prompt_id, lam=lam, index=i) for i in range(n)]


def quantization_step(bpp_proxy: float, budget: float = DEFAULT_QUANT_BUDGET) -> float:
    if bpp_proxy <= 0:
        raise ValueError(f"bpp_proxy must be > 0, got {bpp_proxy}")
    return 2.0 ** (-bpp_proxy * budget)


def quantize_codes(vectors: np.ndarray, step: float) -> np.ndarray:
    """Cell index per coordinate; samples in one cell share a code."""
    return np.round(np.asarray(vectors, dtype=np.float64) / step)


def compress_knob(
    samples: Sequence[ToySample],
    bpp_proxy: float,
    budget: float = DEFAULT_QUANT_BUDGET,
    seed: int = 0,
) -> list[ToySample]:
    """Quantize-and-dither reconstruction; lower bpp means a coarser grid.

    Dither normals are keyed by (seed, prompt, sample index) only, so sweeping
    bpp rescales the same draws instead of resampling them.
    """
    step = quantization_step(bpp_proxy, budget)
    out: list[ToySample] = []
    by_prompt: dict[str, list[ToySample]] = {}
    for s in samples:
        by_prompt.setdefault(s.prompt_id, []).append(s)
    for prompt_id, group in by_prompt.items():
        span = max(s.index for s in group) + 1
        dim = len(group[0].vector)
        noise = stream(seed, "dither", prompt_id).normal(size=(span, dim))
        for s in group:
            code = quantize_codes(s.vector, step)
            rec = code * step + (step / 2.0) * noise[s.index]
            out.append(ToySample(vector=rec, prompt_id=s.prompt_id, lam=s.lam, index=s.index))
    return out


def verdict_for(vector: np.ndarray, prompt_mean: np.ndarray, threshold: float) -> bool:
    v = np.asarray(vector, dtype=np.float64)
    m = np.asarray(prompt_mean, dtype=np.float64)
    nv = math.sqrt(float(v @ v))
    nm = math.sqrt(float(m @ m))
    if nv == 0.0 or nm == 0.0:
        return False
    return float(v @ m) / (nv * nm) >= threshold


def emit_world_dataset(
    world: ToyWorld,
    sweep: Sequence[KnobConfig],
    n_per_prompt: int,
    seed: int,
    n_real_per_prompt: Optional[int] = None,
) -> tuple[EmbeddingTable, VerdictLog]:
    """Sample the world under every config and produce table + synthetic verdicts.

    Real rows are pure conditional draws (guidance 1). Each generated sample
    gets one question whose verdict is cosine(sample, prompt mean) >=
    world.verdict_threshold, computed on the stored float32 vector.
    """
    if not sweep:
        raise ValueError("sweep must be non-empty")
    if n_per_prompt < 1:
        raise ValueError("n_per_prompt must be >= 1")
    n_real = n_per_prompt if n_real_per_prompt is None else n_real_per_prompt

    rows: list[tuple[EmbeddingRowMeta, np.ndarray]] = []
    verdict_entries: list[tuple[str, str, str, bool]] = []

    for prompt in world.prompts:
        real_z = stream(seed, "real", prompt.prompt_id).normal(size=(n_real, world.dim))
        real = prompt.mean + prompt.stddev * real_z
        for i in range(n_real):
            meta = EmbeddingRowMeta(
                record_id=f"r-{prompt.prompt_id}-{i:05d}",
                prompt_id=prompt.prompt_id,
                role=Role.REAL,
                group_id=prompt.group_id,
            )
            rows.append((meta, real[i]))

    for config in sorted(sweep, key=lambda c: c.config_id):
        lam = config.g_scale if config.g_scale is not None else 1.0
        for prompt in world.prompts:
            samples = sample_cfg(world, prompt.prompt_id, lam, n_per_prompt, seed)
            if config.bpp is not None:
                samples = compress_knob(samples, config.bpp, world.quant_budget, seed)
            for s in samples:
                meta = EmbeddingRowMeta(
                    record_id=f"g-{config.config_id}-{prompt.prompt_id}-{s.index:05d}",
                    prompt_id=prompt.prompt_id,
                    role=Role.GENERATED,
                    group_id=prompt.group_id,
                    config_id=config.config_id,
                )
                stored = np.asarray(s.vector, dtype=np.float32)
                rows.append((meta, stored))
                verdict_entries.append(
                    (
                        prompt.prompt_id,
                        meta.record_id,
                        "q0",
                        verdict_for(stored, prompt.mean, world.verdict_threshold),
                    )
                )

    rows.sort(key=lambda mv: mv[0].record_id)
    verdict_entries.sort(key=lambda e: (e[0], e[1], e[2]))
    table = EmbeddingTable(world.dim, [m for m, _ in rows], [v for _, v in rows])
    return table, VerdictLog(tuple(verdict_entries))


def world_to_json(world: ToyWorld) -> dict:
    return {
        "dim": world.dim,
        "seed": world.seed,
        "unconditional": {
            "mean": [float(x) for x in world.unconditional_mean],
            "stddev": world.unconditional_stddev,
        },
        "prompts": [
            {
                "prompt_id": p.prompt_id,
                "mean": [float(x) for x in p.mean],
                "stddev": p.stddev,
                **({"group_id": p.group_id} if p.group_id is not None else {}),
            }
            for p in world.prompts
        ],
        "verdict_threshold": world.verdict_threshold,
        "quant_budget": world.quant_budget,
    }


def world_from_json(obj: dict) -> ToyWorld:
    try:
        dim = int(obj["dim"])
        uncond = obj["unconditional"]
        prompts = tuple(
            ToyPrompt(
                prompt_id=p["prompt_id"],
                mean=np.asarray(p["mean"], dtype=np.float64),
                stddev=float(p["stddev"]),
                group_id=p.get("group_id"),
            )
            for p in obj["prompts"]
        )
        world = ToyWorld(
            dim=dim,
            prompts=prompts,
            unconditional_mean=np.asarray(uncond["mean"], dtype=np.float64),
            unconditional_stddev=float(uncond["stddev"]),
            seed=int(obj.get("seed", 0)),
            verdict_threshold=float(obj.get("verdict_threshold", DEFAULT_VERDICT_THRESHOLD)),
            quant_budget=float(obj.get("quant_budget", DEFAULT_QUANT_BUDGET)),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedJsonError(f"bad world description: {exc}") from None
    if len({p.prompt_id for p in world.prompts}) != len(world.prompts):
        raise MalformedJsonError("duplicate prompt_id in world description")
    return world


def read_world(path: str | Path) -> ToyWorld:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"{path}: {exc}") from None
    return world_from_json(obj)


def write_world(world: ToyWorld, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(world_to_json(world), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def make_demo_world(
    n_prompts: int = 8,
    dim: int = 8,
    seed: int = 7,
    anchor_scale: float = 10.0,
    stddev: float = 1.0,
    verdict_threshold: float = 0.90,
    jitter: float = 0.05,
    n_groups: int = 2,
) -> ToyWorld:
    """A world whose guidance response spreads across the standard grid.

    The unconditional mean sits far on the negative side of a shared anchor
    direction, so raising guidance pushes samples outward along it and the
    alignment signal-to-noise ratio keeps growing over the whole grid; the
    jitter must stay small or the push direction drifts off the prompt means
    and the consistency response flattens. Prompt radii are staggered so each
    prompt's verdict rate transitions at a different guidance value.
    """
    rng = stream(seed, "demo-world")
    anchor = np.zeros(dim)
    anchor[0] = 1.0
    radii = np.linspace(0.6, 3.0, n_prompts)
    prompts = []
    for i in range(n_prompts):
        offset = rng.normal(size=dim) * jitter
        offset[0] = 0.0
        direction = anchor + offset
        direction /= math.sqrt(float(direction @ direction))
        prompts.append(
            ToyPrompt(
                prompt_id=f"p{i:02d}",
                mean=radii[i] * direction,
                stddev=stddev,
                group_id=f"g{i % n_groups}",
            )
        )
    return ToyWorld(
        dim=dim,
        prompts=tuple(prompts),
        unconditional_mean=-anchor_scale * anchor,
        unconditional_stddev=stddev,
        seed=seed,
        verdict_threshold=verdict_threshold,
    )
