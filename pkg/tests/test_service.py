import json
from importlib import resources

import pytest
from fastapi.testclient import TestClient

from cdreval.service import app

DEMO_WORLD = str(resources.files("cdreval.data") / "demo_world.json")
DEMO_SWEEP = str(resources.files("cdreval.data") / "demo_sweep.json")


@pytest.fixture(scope="module")
def client():
    return TestClient(app)


@pytest.fixture(scope="module")
def workspace(client, tmp_path_factory):
    root = tmp_path_factory.mktemp("svc")
    r = client.post(
        "/simulate",
        json={
            "world": DEMO_WORLD,
            "sweep": DEMO_SWEEP,
            "out": str(root / "sim"),
            "seed": 5,
            "n_per_prompt": 8,
        },
    )
    assert r.status_code == 200, r.text
    return root


def test_health(client):
    r = client.get("/health")
    assert r.status_code == 200
    assert r.json()["status"] == "ok"


def test_axes_listing(client):
    r = client.get("/axes")
    assert r.status_code == 200
    axes = {a["name"]: a["direction"] for a in r.json()}
    assert len(axes) == 9
    assert axes["diversity.cond"] == "max"


def test_simulate_reports_counts(client, workspace):
    r = client.post(
        "/simulate",
        json={
            "world": DEMO_WORLD,
            "sweep": DEMO_SWEEP,
            "out": str(workspace / "sim2"),
            "seed": 5,
            "n_per_prompt": 8,
        },
    )
    body = r.json()
    assert body["rows_generated"] == 13 * 8 * 8
    assert body["rows_real"] == 8 * 8
    assert body["verdicts"] == body["rows_generated"]


def test_validate_endpoint(client, workspace):
    r = client.post(
        "/validate",
        json={
            "embeddings": str(workspace / "sim" / "embeddings"),
            "verdicts": str(workspace / "sim" / "verdicts.jsonl"),
        },
    )
    assert r.status_code == 200
    body = r.json()
    assert body["ok"] is True and body["rows"] == 8 * 8 + 13 * 8 * 8


def test_metrics_pareto_plot_endpoints(client, workspace):
    r = client.post(
        "/metrics",
        json={
            "embeddings": str(workspace / "sim" / "embeddings"),
            "verdicts": str(workspace / "sim" / "verdicts.jsonl"),
            "sweep": DEMO_SWEEP,
            "out": str(workspace / "run"),
        },
    )
    assert r.status_code == 200, r.text
    assert len(r.json()["points"]) == 13 * 3

    r = client.post(
        "/pareto",
        json={"metrics": str(workspace / "run" / "metrics.json"), "out": str(workspace / "run")},
    )
    assert r.status_code == 200, r.text
    assert len(r.json()["pairs"]) == 4

    r = client.post(
        "/plot",
        json={
            "metrics": str(workspace / "run" / "metrics.json"),
            "pareto": str(workspace / "run" / "pareto.json"),
            "out": str(workspace / "plots"),
        },
    )
    assert r.status_code == 200, r.text
    assert len(r.json()["files"]) == 9


def test_error_maps_to_422(client, tmp_path):
    r = client.post(
        "/metrics",
        json={
            "embeddings": str(tmp_path / "missing"),
            "sweep": DEMO_SWEEP,
            "out": str(tmp_path),
        },
    )
    assert r.status_code == 422
    assert "error" in r.json()


def test_bad_world_maps_to_422(client, tmp_path):
    bad = tmp_path / "w.json"
    bad.write_text("{\"dim\": 1}")
    r = client.post(
        "/simulate",
        json={"world": str(bad), "sweep": DEMO_SWEEP, "out": str(tmp_path / "o")},
    )
    assert r.status_code == 422
    assert r.json()["error"] == "MalformedJson"


def test_request_schema_validation(client):
    r = client.post("/metrics", json={"embeddings": "x"})  # missing required fields
    assert r.status_code == 422
