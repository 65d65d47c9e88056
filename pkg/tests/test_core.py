import numpy as np
import pytest

from cdreval.core import (
    DEFAULT_AXES,
    FILE_PIPELINE_AXES,
    Direction,
    EmbeddingRowMeta,
    EmbeddingTable,
    MetricAxis,
    MetricPoint,
    Role,
    default_registry,
    parse_direction,
    register_axes,
    validate_table,
)
from cdreval.errors import DuplicateAxisError, UnknownAxisError, UnknownDirectionError


def test_register_axes_simple():
    reg = register_axes([("c", Direction.MAXIMIZE), ("d", "max")])
    assert len(reg) == 2
    assert reg.get("c").direction is Direction.MAXIMIZE


def test_register_axes_duplicate_name():
    with pytest.raises(DuplicateAxisError):
        register_axes([("c", "max"), ("c", "min")])


def test_unknown_direction_token():
    with pytest.raises(UnknownDirectionError):
        parse_direction("sideways")


def test_default_registry_enumeration():
    # Two consistency flavors, four diversity flavors, three realism flavors;
    # every default axis is published as maximize.
    reg = default_registry()
    assert set(reg.names()) == set(DEFAULT_AXES)
    assert len(reg) == 9
    assert all(reg.get(n).direction is Direction.MAXIMIZE for n in reg.names())
    assert sum(n.startswith("consistency.") for n in reg.names()) == 2
    assert sum(n.startswith("diversity.") for n in reg.names()) == 4
    assert sum(n.startswith("realism.") for n in reg.names()) == 3
    # The file pipeline cannot compute the prompt-cosine consistency flavor.
    assert set(FILE_PIPELINE_AXES) == set(DEFAULT_AXES) - {"consistency.clip"}


def test_registry_unknown_axis():
    with pytest.raises(UnknownAxisError):
        default_registry().get("no.such.axis")


def test_validate_table_clean():
    metas = [
        EmbeddingRowMeta("a", "p0", Role.REAL),
        EmbeddingRowMeta("b", "p0", Role.GENERATED, config_id="c1"),
        EmbeddingRowMeta("c", "p1", Role.GENERATED, group_id="g0", config_id="c1"),
    ]
    table = EmbeddingTable(3, metas, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert validate_table(table).ok


def test_validate_table_dim_mismatch():
    metas = [EmbeddingRowMeta("a", "p0", Role.REAL)]
    table = EmbeddingTable(3, metas, [[1.0, 2.0]])
    assert validate_table(table).kinds() == ["DimMismatch"]


def test_validate_table_missing_config():
    metas = [EmbeddingRowMeta("a", "p0", Role.GENERATED)]
    table = EmbeddingTable(2, metas, [[1.0, 2.0]])
    assert validate_table(table).kinds() == ["MissingConfig"]


def test_validate_table_duplicate_and_zero():
    metas = [
        EmbeddingRowMeta("a", "p0", Role.REAL),
        EmbeddingRowMeta("a", "p0", Role.REAL),
        EmbeddingRowMeta("b", "p0", Role.REAL),
    ]
    table = EmbeddingTable(2, metas, [[1, 0], [2, 0], [0, 0]])
    assert validate_table(table).kinds() == ["DuplicateRecordId", "ZeroVector"]


def test_validate_table_real_with_config():
    metas = [EmbeddingRowMeta("a", "p0", Role.REAL, config_id="c1")]
    table = EmbeddingTable(1, metas, [[1.0]])
    assert validate_table(table).kinds() == ["RealRowConfig"]


def test_validate_idempotent_and_pure():
    metas = [EmbeddingRowMeta("a", "p0", Role.GENERATED)]
    table = EmbeddingTable(1, metas, [[1.0]])
    first = validate_table(table)
    second = validate_table(table)
    assert first == second


def test_metric_point_rejects_non_finite():
    with pytest.raises(ValueError):
        MetricPoint("c", "all", {"a": float("nan")})


def test_metric_point_complete_on():
    p = MetricPoint("c", "all", {"a": 1.0, "b": 2.0}, missing={"z": "why"})
    assert p.complete_on(["a", "b"])
    assert not p.complete_on(["a", "z"])


def test_knob_config_ranges():
    from cdreval.core import KnobConfig

    with pytest.raises(ValueError):
        KnobConfig("c", "m", top_m_pct=0.0)
    with pytest.raises(ValueError):
        KnobConfig("c", "m", g_scale=-1.0)
    with pytest.raises(ValueError):
        KnobConfig("c", "m", bpp=0.0)
    with pytest.raises(ValueError):
        KnobConfig("c", "")
    cfg = KnobConfig("c", "m", g_scale=3.0, top_m_pct=100.0, k_neighbors=4, bpp=0.01)
    assert cfg.top_m_pct == 100.0


def test_axis_objects_accepted():
    reg = register_axes([MetricAxis("x", Direction.MINIMIZE)])
    assert reg.get("x").direction is Direction.MINIMIZE
