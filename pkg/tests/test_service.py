from __future__ import annotations

import json
import warnings

import numpy as np
import pytest
from conftest import S1_A, S1_B, S2_A, S2_B, S3_A, S3_B

with warnings.catch_warnings():
    warnings.simplefilter("ignore")
    from fastapi.testclient import TestClient

from kccflow.service.app import create_app

S1 = {"type": "lotka_volterra", "a": S1_A, "b": S1_B}
S2 = {"type": "lotka_volterra", "a": S2_A, "b": S2_B}
S3 = {"type": "lotka_volterra", "a": S3_A, "b": S3_B}
CUSTOM = {"type": "custom", "dimension": 3, "components": ["x2", "-x1", "0"]}

REPORT_FIELDS = [
    "tool",
    "system",
    "state",
    "jacobian",
    "semispray",
    "nonlinear_connection",
    "d_torsions",
    "yang_mills_energy",
    "hamilton_connection",
    "hamilton_torsions",
    "first_invariant",
    "deviation_matrix",
    "spectrum",
    "verdict",
    "sign_convention",
]


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app())


def test_health(client):
    body = client.get("/health").json()
    assert body["name"] == "kccflow"
    assert body["version"]


def test_analyze_s1_interior(client):
    r = client.post("/analyze", json={"system": S1, "point": [1.0, 1.0, 1.0]})
    assert r.status_code == 200
    body = r.json()
    assert list(body.keys()) == REPORT_FIELDS
    assert body["system"] == {"type": "lotka_volterra", "a": S1_A, "b": S1_B}
    assert body["state"]["y"] == [0.0, 0.0, 0.0]  # velocity defaults to X(x) = 0 here
    assert body["state"]["p"] == [0.0, 0.0, 0.0]
    assert body["nonlinear_connection"]["data"] == pytest.approx([0.0] * 9, abs=0.0)
    assert body["yang_mills_energy"] == 0.0
    assert body["verdict"] == "jacobi_stable"
    assert sorted(z[0] for z in body["spectrum"]) == pytest.approx([-16.0, -1.0, -1.0], abs=1e-7)
    assert all(z[1] == 0.0 for z in body["spectrum"])


def test_analyze_s3_values(client):
    r = client.post("/analyze", json={"system": S3, "point": [1.0, 1.0, 1.0]})
    body = r.json()
    N = np.array(body["nonlinear_connection"]["data"]).reshape(3, 3)
    assert N[0, 1] == -1.0 and N[0, 2] == -2.0 and N[1, 2] == -1.0
    assert N[1, 0] == 1.0 and N[2, 0] == 2.0 and N[2, 1] == 1.0
    assert body["yang_mills_energy"] == 6.0
    NH = np.array(body["hamilton_connection"]["data"]).reshape(3, 3)
    assert NH[0, 0] == -12.0 and NH[1, 1] == -36.0 and NH[2, 2] == -64.0
    assert body["jacobian"]["rows"] == 3 and body["jacobian"]["cols"] == 3


def test_analyze_velocity_default_is_field_value(client):
    r = client.post("/analyze", json={"system": S2, "point": [1.0, 1.0, 1.0]})
    assert r.json()["state"]["y"] == [-2.0, -2.0, -2.0]
    r = client.post(
        "/analyze",
        json={"system": S2, "point": [1.0, 1.0, 1.0], "velocity": [1.0, 0.0, 0.0]},
    )
    assert r.json()["state"]["y"] == [1.0, 0.0, 0.0]


def test_analyze_report_serialization_round_trips(client):
    r = client.post("/analyze", json={"system": S3, "point": [0.5, 1.5, 2.5]})
    parsed = json.loads(r.content)
    again = json.dumps(parsed, ensure_ascii=False, allow_nan=False, separators=(",", ":")).encode()
    assert again == r.content


def test_analyze_validation_errors(client):
    r = client.post("/analyze", json={"system": S1, "point": [1.0, 1.0]})
    assert r.status_code == 400
    r = client.post("/analyze", json={"system": {"type": "weird"}, "point": [1, 1, 1]})
    assert r.status_code == 422
    bad = {"type": "lotka_volterra", "a": [[0.0] * 3] * 3, "b": [1.0, 1.0, 1.0]}
    r = client.post("/analyze", json={"system": bad, "point": [1, 1, 1]})
    assert r.status_code == 400
    r = client.post("/analyze", json={"system": S1, "point": [1.0, 1.0, 1.0], "velocity": [1.0]})
    assert r.status_code == 400


def test_analyze_numerical_overflow_is_500(client):
    system = {"type": "custom", "dimension": 2, "components": ["x1^9", "x2"]}
    r = client.post("/analyze", json={"system": system, "point": [1e40, 1.0]})
    assert r.status_code == 500
    assert r.json()["detail"]["kind"] == "numerical"


def test_stability_s1(client):
    r = client.post("/stability", json={"system": S1})
    assert r.status_code == 200
    body = r.json()
    lines = body["csv"].strip().split("\n")
    assert len(lines) == 9
    assert body["skipped"] == []


def test_stability_s2_diagnostics(client):
    body = client.post("/stability", json={"system": S2}).json()
    assert len(body["skipped"]) == 4
    assert any("singular" in s for s in body["skipped"])


def test_stability_rejects_custom(client):
    r = client.post("/stability", json={"system": CUSTOM})
    assert r.status_code == 400


def test_integrate_flow(client):
    r = client.post(
        "/integrate",
        json={"system": S1, "x0": [0.5, 0.5, 0.5], "h": 0.01, "steps": 100},
    )
    assert r.status_code == 200
    body = r.json()
    assert not body["truncated"]
    lines = body["csv"].strip().split("\n")
    assert lines[0] == "t,x1,x2,x3"
    assert len(lines) == 102


def test_integrate_el_mode_with_sentinel(client):
    r = client.post(
        "/integrate",
        json={"system": S1, "x0": [0.5, 0.5, 0.5], "h": 0.01, "steps": 50, "mode": "el", "y0": "X"},
    )
    lines = r.json()["csv"].strip().split("\n")
    assert lines[0] == "t,x1,x2,x3,y1,y2,y3"


def test_integrate_validation(client):
    r = client.post(
        "/integrate", json={"system": S1, "x0": [0.5, 0.5, 0.5], "h": 0.01, "steps": 0}
    )
    assert r.status_code == 422
    r = client.post(
        "/integrate",
        json={"system": S1, "x0": [0.5, 0.5, 0.5], "h": 0.01, "steps": 5, "mode": "el", "residual": True},
    )
    assert r.status_code == 400


def test_integrate_truncation_flag(client):
    system = {"type": "custom", "dimension": 2, "components": ["x1^2", "0"]}
    r = client.post(
        "/integrate", json={"system": system, "x0": [10.0, 1.0], "h": 0.01, "steps": 50}
    )
    body = r.json()
    assert body["truncated"] is True
    assert body["truncated_at"] is not None
    assert "# truncated at t=" in body["csv"]


def test_surface_obj_and_csv(client):
    r = client.post("/surface", json={"system": S3, "rho": 1.0, "resolution": 16})
    assert r.status_code == 200
    body = r.json()
    assert body["classification"] == "ellipsoid"
    assert body["content"].startswith("v ")
    assert len([l for l in body["content"].strip().split("\n") if l.startswith("v ")]) == 256
    r = client.post(
        "/surface", json={"system": S2, "rho": 1.5, "resolution": 8, "format": "csv"}
    )
    body = r.json()
    assert body["classification"] == "elliptic_cylinder"
    assert body["content"].startswith("x1,x2,x3")


def test_surface_validation(client):
    r = client.post("/surface", json={"system": S3, "rho": -1.0})
    assert r.status_code == 422
    r = client.post("/surface", json={"system": CUSTOM, "rho": 1.0})
    assert r.status_code == 400
    r = client.post("/surface", json={"system": S3, "rho": 1.0, "resolution": 4})
    assert r.status_code == 422


def test_sweep_endpoint(client):
    r = client.post(
        "/sweep",
        json={"system": S1, "axes": [{"path": "a.1.2", "lo": 0.5, "hi": 2.0, "step": 0.5}]},
    )
    assert r.status_code == 200
    lines = r.json()["csv"].strip().split("\n")
    assert len(lines) == 5


def test_sweep_validation(client):
    r = client.post(
        "/sweep",
        json={"system": S1, "axes": [{"path": "a.9.1", "lo": 0.5, "hi": 1.0, "step": 0.5}]},
    )
    assert r.status_code == 400
    r = client.post(
        "/sweep",
        json={"system": S1, "axes": [{"path": "a.1.2", "lo": -1.0, "hi": 1.0, "step": 0.5}]},
    )
    assert r.status_code == 400
    r = client.post("/sweep", json={"system": S1, "axes": []})
    assert r.status_code == 422


def test_sweep_workers_agree(client):
    axes = [{"path": "a.1.2", "lo": 0.5, "hi": 2.0, "step": 0.25}]
    one = client.post("/sweep", json={"system": S3, "axes": axes, "workers": 1})
    four = client.post("/sweep", json={"system": S3, "axes": axes, "workers": 4})
    assert one.content == four.content
