import csv
import hashlib
import io
import json

import pytest

from cdreval.core import MetricPoint, default_registry, register_axes
from cdreval.pareto import pareto_front
from cdreval.reporting import (
    CANONICAL_PAIRS,
    dump_json,
    fmt_value,
    load_metrics,
    metrics_csv_payload,
    metrics_json_payload,
    pareto_json_payload,
    plot_filename,
    run_manifest,
    sha256_file,
    verify_manifest,
    write_plots,
)
from cdreval.svgplot import PlotPoint, PlotSpec, render_scatter

REG = register_axes([("x", "max"), ("y", "max")])


def three_points(group="all"):
    return [
        MetricPoint("c0", group, {"x": 0.1, "y": 0.9}),
        MetricPoint("c1", group, {"x": 0.5, "y": 0.5}),
        MetricPoint("c2", group, {"x": 0.2, "y": 0.3}),
    ]


def test_canonical_axis_sets():
    assert len(CANONICAL_PAIRS) == 4
    assert all(len(p) == 2 for p in CANONICAL_PAIRS[:3])
    assert len(CANONICAL_PAIRS[3]) == 3


def test_fmt_value_round_trips():
    for v in (0.1, 1 / 3, 1e-17, 123456.789, -2.5e300):
        assert float(fmt_value(v)) == v


def test_csv_json_agreement():
    pts = three_points()
    csv_text = metrics_csv_payload(pts, ["x", "y"])
    payload = metrics_json_payload(pts, REG, ["x", "y"], k=3)
    json_vals = {
        (p["config_id"], p["group_id"], a): v
        for p in payload["points"]
        for a, v in p["scores"].items()
    }
    rows = list(csv.DictReader(io.StringIO(csv_text)))
    assert len(rows) == 6
    for row in rows:
        assert float(row["value"]) == json_vals[(row["config_id"], row["group_id"], row["axis"])]


def test_metrics_json_round_trip(tmp_path):
    pts = three_points()
    payload = metrics_json_payload(pts, REG, ["x", "y"], k=3)
    path = tmp_path / "metrics.json"
    path.write_text(dump_json(payload))
    loaded_payload, loaded_points = load_metrics(path)
    assert loaded_payload == payload
    assert loaded_points == pts


def test_pareto_payload_matches_engine():
    pts = three_points()
    payload = pareto_json_payload(pts, REG, pairs=(("x", "y"),))
    result = pareto_front(pts, ("x", "y"), REG)
    assert [e["config_id"] for e in payload["pairs"][0]["fronts"]["all"]["front"]] == [
        e.config_id for e in result.front
    ]


def test_svg_element_counts():
    pts = [PlotPoint("a", 0.1, 0.9, True), PlotPoint("b", 0.5, 0.5, True), PlotPoint("c", 0.2, 0.3, False)]
    svg = render_scatter(pts, PlotSpec("x", "y"), front_order=["a", "b"])
    assert svg.count("<circle") == 3
    assert svg.count("<polyline") == 1
    assert "x (max)" in svg and "y (max)" in svg


def test_svg_deterministic_bytes():
    pts = [PlotPoint("a", 0.1, 0.9, True), PlotPoint("b", 0.5, 0.5, False)]
    a = render_scatter(pts, PlotSpec("x", "y"))
    b = render_scatter(pts, PlotSpec("x", "y"))
    assert hashlib.sha256(a.encode()).hexdigest() == hashlib.sha256(b.encode()).hexdigest()


def test_svg_degenerate_extent():
    pts = [PlotPoint("a", 0.5, 0.5, True), PlotPoint("b", 0.5, 0.5, False)]
    svg = render_scatter(pts, PlotSpec("x", "y"))
    assert svg.count("<circle") == 2


def test_plot_spec_validation():
    with pytest.raises(ValueError):
        PlotSpec("x", "y", width=0)


def test_write_plots_one_per_pair_group(tmp_path):
    groups = [f"region{i}" for i in range(6)]
    pts = []
    for g in groups:
        pts.extend(three_points(group=g))
    payload = metrics_json_payload(pts, REG, ["x", "y"], k=3)
    pareto = pareto_json_payload(pts, REG, pairs=(("x", "y"),))
    written = write_plots(payload, pts, pareto, tmp_path)
    assert len(written) == 6
    assert sorted(p.name for p in written) == sorted(plot_filename(("x", "y"), g) for g in groups)


def test_manifest_verification(tmp_path):
    data = tmp_path / "input.bin"
    data.write_bytes(b"hello")
    out = tmp_path / "out.json"
    out.write_text("{}")
    manifest = run_manifest(
        inputs={"data": str(data)},
        outputs={"out": str(out)},
        axes=["x"],
        registry=REG,
        k=3,
        out_dir=tmp_path,
    )
    mpath = tmp_path / "run_manifest.json"
    mpath.write_text(dump_json(manifest))
    assert verify_manifest(mpath) == []
    data.write_bytes(b"tampered")
    assert verify_manifest(mpath) == ["inputs.data"]


def test_sha256_file(tmp_path):
    p = tmp_path / "f"
    p.write_bytes(b"abc")
    assert sha256_file(p) == hashlib.sha256(b"abc").hexdigest()


def test_default_registry_payload_lists_directions():
    reg = default_registry()
    payload = metrics_json_payload([], reg, reg.names(), k=3)
    assert payload["axes"]["diversity.cond"] == "max"
    assert len(payload["axes"]) == 9
