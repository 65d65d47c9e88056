"""On-disk formats: CDRE embedding payload, JSONL sidecar, verdicts, sweeps.

CDRE layout: magic b"CDRE" | u32 LE version (=1) | u32 LE dim | u64 LE count,
then count*dim float32 LE values, row-major. Metadata lives in a separate
`<name>.meta.jsonl` sidecar (one object per payload row) so the payload stays
memory-mappable. Readers never repair: any header/sidecar violation raises.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path
from typing import Sequence

import numpy as np

from .core import EmbeddingRowMeta, EmbeddingTable, KnobConfig, Role, VerdictLog, validate_table
from .errors import (
    BadMagicError,
    DuplicateConfigIdError,
    DuplicateVerdictError,
    InvalidTableError,
    KnobOutOfRangeError,
    LengthMismatchError,
    MalformedJsonError,
    SidecarRowGapError,
    VersionUnsupportedError,
)

MAGIC = b"CDRE"
VERSION = 1
HEADER = struct.Struct("<4sIIQ")  # magic, version, dim, count
HEADER_SIZE = HEADER.size

ROLE_LITERALS = {"real": Role.REAL, "generated": Role.GENERATED}


def table_paths(prefix: str | Path) -> tuple[Path, Path]:
    """Payload/sidecar pair for a prefix; a trailing `.cdre` is tolerated."""
    prefix = Path(prefix)
    if prefix.suffix == ".cdre":
        prefix = prefix.with_suffix("")
    return prefix.with_suffix(".cdre"), Path(str(prefix) + ".meta.jsonl")


def write_table(table: EmbeddingTable, prefix: str | Path) -> tuple[Path, Path]:
    """Write payload + sidecar. The table must pass validate_table first."""
    report = validate_table(table)
    if not report.ok:
        raise InvalidTableError(f"refusing to write invalid table: {report.kinds()[:5]}")
    payload_path, sidecar_path = table_paths(prefix)
    data = np.ascontiguousarray(table.matrix(), dtype="<f4")
    with open(payload_path, "wb") as f:
        f.write(HEADER.pack(MAGIC, VERSION, table.dim, len(table)))
        f.write(data.tobytes())
    with open(sidecar_path, "w", encoding="utf-8") as f:
        for row, meta in enumerate(table.metas):
            obj = {
                "row": row,
                "record_id": meta.record_id,
                "prompt_id": meta.prompt_id,
                "role": meta.role.value,
            }
            if meta.group_id is not None:
                obj["group_id"] = meta.group_id
            if meta.config_id is not None:
                obj["config_id"] = meta.config_id
            f.write(json.dumps(obj, sort_keys=True) + "\n")
    return payload_path, sidecar_path


def _parse_sidecar_line(line: str, lineno: int) -> tuple[int, EmbeddingRowMeta]:
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"sidecar line {lineno}: {exc}") from None
    if not isinstance(obj, dict):
        raise MalformedJsonError(f"sidecar line {lineno}: expected object")
    try:
        row = obj["row"]
        record_id = obj["record_id"]
        prompt_id = obj["prompt_id"]
        role_str = obj["role"]
    except KeyError as exc:
        raise MalformedJsonError(f"sidecar line {lineno}: missing key {exc}") from None
    if not isinstance(row, int) or isinstance(row, bool):
        raise MalformedJsonError(f"sidecar line {lineno}: row must be an integer")
    if role_str not in ROLE_LITERALS:
        raise MalformedJsonError(f"sidecar line {lineno}: role must be 'real' or 'generated', got {role_str!r}")
    if not isinstance(record_id, str) or not isinstance(prompt_id, str):
        raise MalformedJsonError(f"sidecar line {lineno}: ids must be strings")
    group_id = obj.get("group_id")
    config_id = obj.get("config_id")
    if group_id is not None and not isinstance(group_id, str):
        raise MalformedJsonError(f"sidecar line {lineno}: group_id must be a string")
    if config_id is not None and not isinstance(config_id, str):
        raise MalformedJsonError(f"sidecar line {lineno}: config_id must be a string")
    meta = EmbeddingRowMeta(
        record_id=record_id,
        prompt_id=prompt_id,
        role=ROLE_LITERALS[role_str],
        group_id=group_id,
        config_id=config_id,
    )
    return row, meta


def read_table(prefix: str | Path, validate: bool = True) -> EmbeddingTable:
    """Read a payload/sidecar pair back into an EmbeddingTable.

    Errors: BadMagic, VersionUnsupported, LengthMismatch (payload size vs
    header), SidecarRowGap (missing/duplicate/out-of-range row index),
    MalformedJson, InvalidTable (when validate=True and invariants fail).
    """
    payload_path, sidecar_path = table_paths(prefix)
    raw = Path(payload_path).read_bytes()
    if len(raw) < HEADER_SIZE:
        raise LengthMismatchError(f"{payload_path}: file shorter than header ({len(raw)} bytes)")
    magic, version, dim, count = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise BadMagicError(f"{payload_path}: got {magic!r}")
    if version != VERSION:
        raise VersionUnsupportedError(f"{payload_path}: version {version}")
    if dim < 1:
        raise LengthMismatchError(f"{payload_path}: dim must be >= 1, got {dim}")
    expected = HEADER_SIZE + count * dim * 4
    if len(raw) != expected:
        raise LengthMismatchError(f"{payload_path}: expected {expected} bytes, found {len(raw)}")
    vectors = np.frombuffer(raw, dtype="<f4", offset=HEADER_SIZE).reshape(count, dim)

    metas: list[EmbeddingRowMeta | None] = [None] * count
    with open(sidecar_path, encoding="utf-8") as f:
        n_lines = 0
        for lineno, line in enumerate(f, start=1):
            if not line.strip():
                continue
            n_lines += 1
            row, meta = _parse_sidecar_line(line, lineno)
            if not 0 <= row < count:
                raise SidecarRowGapError(f"{sidecar_path}: row {row} outside 0..{count - 1}")
            if metas[row] is not None:
                raise SidecarRowGapError(f"{sidecar_path}: row {row} appears twice")
            metas[row] = meta
    if n_lines != count:
        missing = [i for i, m in enumerate(metas) if m is None]
        raise SidecarRowGapError(f"{sidecar_path}: {count} rows expected, {n_lines} present (missing {missing[:5]})")

    table = EmbeddingTable(dim, [m for m in metas if m is not None], vectors)
    if validate:
        report = validate_table(table)
        if not report.ok:
            raise InvalidTableError(f"{payload_path}: {report.kinds()[:5]}")
    return table


def read_verdicts(path: str | Path) -> VerdictLog:
    """Parse a verdicts.jsonl file; duplicate (prompt, record, question) triples raise."""
    entries: list[tuple[str, str, str, bool]] = []
    seen: set[tuple[str, str, str]] = set()
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedJsonError(f"{path} line {lineno}: {exc}") from None
            try:
                prompt_id = obj["prompt_id"]
                record_id = obj["record_id"]
                question_id = obj["question_id"]
                verdict = obj["verdict"]
            except (TypeError, KeyError) as exc:
                raise MalformedJsonError(f"{path} line {lineno}: missing key {exc}") from None
            if not isinstance(verdict, bool):
                raise MalformedJsonError(f"{path} line {lineno}: verdict must be true or false, got {verdict!r}")
            if not (isinstance(prompt_id, str) and isinstance(record_id, str) and isinstance(question_id, str)):
                raise MalformedJsonError(f"{path} line {lineno}: ids must be strings")
            triple = (prompt_id, record_id, question_id)
            if triple in seen:
                raise DuplicateVerdictError(f"{path} line {lineno}: duplicate {triple}")
            seen.add(triple)
            entries.append((prompt_id, record_id, question_id, verdict))
    return VerdictLog(tuple(entries))


def write_verdicts(log: VerdictLog, path: str | Path) -> Path:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as f:
        for prompt_id, record_id, question_id, verdict in log.entries:
            f.write(
                json.dumps(
                    {
                        "prompt_id": prompt_id,
                        "record_id": record_id,
                        "question_id": question_id,
                        "verdict": verdict,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    return path


_KNOB_KEYS = {"config_id", "model_name", "g_scale", "top_m_pct", "k_neighbors", "bpp"}


def read_sweep(path: str | Path) -> list[KnobConfig]:
    """Parse sweep.json: a JSON array of knob-config objects with unique ids."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise MalformedJsonError(f"{path}: {exc}") from None
    if not isinstance(data, list):
        raise MalformedJsonError(f"{path}: expected a JSON array of config objects")
    configs: list[KnobConfig] = []
    seen: set[str] = set()
    for i, obj in enumerate(data):
        if not isinstance(obj, dict):
            raise MalformedJsonError(f"{path}[{i}]: expected object")
        unknown = set(obj) - _KNOB_KEYS
        if unknown:
            raise MalformedJsonError(f"{path}[{i}]: unknown keys {sorted(unknown)}")
        try:
            cfg = KnobConfig(
                config_id=obj.get("config_id", ""),
                model_name=obj.get("model_name", ""),
                g_scale=obj.get("g_scale"),
                top_m_pct=obj.get("top_m_pct"),
                k_neighbors=obj.get("k_neighbors"),
                bpp=obj.get("bpp"),
            )
        except (ValueError, TypeError) as exc:
            raise KnobOutOfRangeError(f"{path}[{i}]: {exc}") from None
        if cfg.config_id in seen:
            raise DuplicateConfigIdError(f"{path}[{i}]: config_id {cfg.config_id!r} repeated")
        seen.add(cfg.config_id)
        configs.append(cfg)
    return configs


def write_sweep(configs: Sequence[KnobConfig], path: str | Path) -> Path:
    path = Path(path)
    out = []
    for cfg in configs:
        obj: dict = {"config_id": cfg.config_id, "model_name": cfg.model_name}
        for key in ("g_scale", "top_m_pct", "k_neighbors", "bpp"):
            value = getattr(cfg, key)
            if value is not None:
                obj[key] = value
        out.append(obj)
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path
