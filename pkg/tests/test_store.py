import json

import numpy as np
import pytest

from cdreval.core import EmbeddingRowMeta, EmbeddingTable, Role
from cdreval.errors import (
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
from cdreval.store import (
    HEADER_SIZE,
    read_sweep,
    read_table,
    read_verdicts,
    write_sweep,
    write_table,
    write_verdicts,
)
from conftest import random_table


def test_payload_size_two_rows_dim_three(tmp_path, rng):
    table = random_table(rng, n_real=1, n_generated=1, dim=3)
    payload, sidecar = write_table(table, tmp_path / "t")
    assert payload.stat().st_size == HEADER_SIZE + 2 * 3 * 4
    assert len(sidecar.read_text().strip().splitlines()) == 2


def test_empty_table(tmp_path):
    table = EmbeddingTable(4, [], [])
    payload, sidecar = write_table(table, tmp_path / "empty")
    assert payload.stat().st_size == HEADER_SIZE
    assert sidecar.read_text() == ""
    back = read_table(tmp_path / "empty")
    assert len(back) == 0 and back.dim == 4


def test_round_trip_bit_exact(tmp_path, rng):
    table = random_table(rng, n_real=5, n_generated=7, dim=9)
    write_table(table, tmp_path / "a")
    back = read_table(tmp_path / "a")
    assert back == table
    # byte-compare oracle: writing the reread table reproduces the files
    write_table(back, tmp_path / "b")
    assert (tmp_path / "a.cdre").read_bytes() == (tmp_path / "b.cdre").read_bytes()
    assert (tmp_path / "a.meta.jsonl").read_bytes() == (tmp_path / "b.meta.jsonl").read_bytes()


def test_bad_magic(tmp_path, rng):
    write_table(random_table(rng), tmp_path / "t")
    raw = bytearray((tmp_path / "t.cdre").read_bytes())
    raw[:4] = b"XDRE"
    (tmp_path / "t.cdre").write_bytes(bytes(raw))
    with pytest.raises(BadMagicError):
        read_table(tmp_path / "t")


def test_version_unsupported(tmp_path, rng):
    write_table(random_table(rng), tmp_path / "t")
    raw = bytearray((tmp_path / "t.cdre").read_bytes())
    raw[4:8] = (2).to_bytes(4, "little")
    (tmp_path / "t.cdre").write_bytes(bytes(raw))
    with pytest.raises(VersionUnsupportedError):
        read_table(tmp_path / "t")


def test_truncated_payload(tmp_path, rng):
    write_table(random_table(rng), tmp_path / "t")
    raw = (tmp_path / "t.cdre").read_bytes()
    (tmp_path / "t.cdre").write_bytes(raw[:-4])
    with pytest.raises(LengthMismatchError):
        read_table(tmp_path / "t")


def test_sidecar_row_gap(tmp_path, rng):
    write_table(random_table(rng, n_real=2, n_generated=1), tmp_path / "t")
    lines = (tmp_path / "t.meta.jsonl").read_text().splitlines()
    (tmp_path / "t.meta.jsonl").write_text("\n".join(lines[:-1]) + "\n")
    with pytest.raises(SidecarRowGapError):
        read_table(tmp_path / "t")


def test_sidecar_duplicate_row(tmp_path, rng):
    write_table(random_table(rng, n_real=2, n_generated=0), tmp_path / "t")
    lines = (tmp_path / "t.meta.jsonl").read_text().splitlines()
    (tmp_path / "t.meta.jsonl").write_text("\n".join([lines[0], lines[0]]) + "\n")
    with pytest.raises(SidecarRowGapError):
        read_table(tmp_path / "t")


def test_sidecar_malformed_json(tmp_path, rng):
    write_table(random_table(rng, n_real=1, n_generated=0), tmp_path / "t")
    (tmp_path / "t.meta.jsonl").write_text("{not json\n")
    with pytest.raises(MalformedJsonError):
        read_table(tmp_path / "t")


def test_sidecar_bad_role_literal(tmp_path, rng):
    write_table(random_table(rng, n_real=1, n_generated=0), tmp_path / "t")
    obj = json.loads((tmp_path / "t.meta.jsonl").read_text())
    obj["role"] = "synthetic"
    (tmp_path / "t.meta.jsonl").write_text(json.dumps(obj) + "\n")
    with pytest.raises(MalformedJsonError):
        read_table(tmp_path / "t")


def test_read_rejects_invalid_table(tmp_path, rng):
    write_table(random_table(rng, n_real=1, n_generated=1), tmp_path / "t")
    lines = (tmp_path / "t.meta.jsonl").read_text().splitlines()
    objs = [json.loads(line) for line in lines]
    del objs[1]["config_id"]  # generated row loses its config
    (tmp_path / "t.meta.jsonl").write_text("\n".join(json.dumps(o) for o in objs) + "\n")
    with pytest.raises(InvalidTableError):
        read_table(tmp_path / "t")
    table = read_table(tmp_path / "t", validate=False)
    assert len(table) == 2


def test_write_rejects_invalid_table(tmp_path):
    table = EmbeddingTable(2, [EmbeddingRowMeta("a", "p", Role.GENERATED)], [[1.0, 0.0]])
    with pytest.raises(InvalidTableError):
        write_table(table, tmp_path / "t")


def test_verdicts_round_trip(tmp_path):
    path = tmp_path / "verdicts.jsonl"
    path.write_text(
        '{"prompt_id":"p0","record_id":"i0","question_id":"q0","verdict":true}\n'
        '{"prompt_id":"p0","record_id":"i0","question_id":"q1","verdict":false}\n'
        '{"prompt_id":"p0","record_id":"i1","question_id":"q0","verdict":true}\n'
    )
    log = read_verdicts(path)
    assert len(log) == 3
    assert log.by_record()["i0"] == [True, False]
    write_verdicts(log, tmp_path / "copy.jsonl")
    assert read_verdicts(tmp_path / "copy.jsonl") == log


def test_verdicts_duplicate_triple(tmp_path):
    path = tmp_path / "verdicts.jsonl"
    line = '{"prompt_id":"p0","record_id":"i0","question_id":"q0","verdict":true}\n'
    path.write_text(line + line)
    with pytest.raises(DuplicateVerdictError):
        read_verdicts(path)


def test_verdicts_non_boolean(tmp_path):
    path = tmp_path / "verdicts.jsonl"
    path.write_text('{"prompt_id":"p0","record_id":"i0","question_id":"q0","verdict":"yes"}\n')
    with pytest.raises(MalformedJsonError):
        read_verdicts(path)


def test_sweep_guidance_grid(tmp_path):
    grid = [1.01, 3.0, 5.0, 7.5, 10.0, 12.5]
    path = tmp_path / "sweep.json"
    path.write_text(
        json.dumps([{"config_id": f"g{v}", "model_name": "ldm", "g_scale": v} for v in grid])
    )
    configs = read_sweep(path)
    assert len(configs) == 6
    assert [c.g_scale for c in configs] == grid


def test_sweep_top_m_grid(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(
        json.dumps(
            [{"config_id": f"m{v}", "model_name": "ldm", "top_m_pct": v} for v in (10, 20, 50, 100)]
        )
    )
    assert len(read_sweep(path)) == 4


def test_sweep_bpp_grid(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(
        json.dumps(
            [{"config_id": f"b{v}", "model_name": "perco", "bpp": v} for v in (0.01, 0.005, 0.002)]
        )
    )
    assert len(read_sweep(path)) == 3


def test_sweep_retrieval_model_grids(tmp_path):
    path = tmp_path / "sweep.json"
    rdm_g = [1.01, 1.5, 2.0, 3.0, 5.0]
    perco_g = [1.01, 3.0, 5.0, 7.5]
    neighbors = [1, 4, 8, 12, 20]
    configs = (
        [{"config_id": f"rdm-g{v}", "model_name": "rdm", "g_scale": v} for v in rdm_g]
        + [{"config_id": f"perco-g{v}", "model_name": "perco", "g_scale": v} for v in perco_g]
        + [{"config_id": f"rdm-k{v}", "model_name": "rdm", "k_neighbors": v} for v in neighbors]
    )
    path.write_text(json.dumps(configs))
    parsed = read_sweep(path)
    assert len(parsed) == 14
    assert [c.k_neighbors for c in parsed[-5:]] == neighbors


def test_sweep_duplicate_config_id(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps([{"config_id": "c", "model_name": "m"}] * 2))
    with pytest.raises(DuplicateConfigIdError):
        read_sweep(path)


def test_sweep_knob_out_of_range(tmp_path):
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps([{"config_id": "c", "model_name": "m", "top_m_pct": 101}]))
    with pytest.raises(KnobOutOfRangeError):
        read_sweep(path)


def test_sweep_write_read(tmp_path, rng):
    from cdreval.core import KnobConfig

    configs = [KnobConfig("a", "m", g_scale=3.0), KnobConfig("b", "m", bpp=0.01)]
    write_sweep(configs, tmp_path / "sweep.json")
    assert read_sweep(tmp_path / "sweep.json") == configs
