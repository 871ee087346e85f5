import inspect
import math

import pytest
from fastapi.routing import APIRoute

from valleyqubit.main import app


@pytest.mark.asyncio
async def test_simulate_equator(client):
    response = await client.post("/api/v1/simulate", json={"theta_deg": 90, "visibility": 0.2})
    assert response.status_code == 200
    scan = response.json()
    assert len(scan["intensities"]) == 25
    assert max(scan["intensities"]) == pytest.approx(0.6, abs=1e-12)
    assert scan["sigma_plus"] == pytest.approx(1.0)


@pytest.mark.asyncio
async def test_simulate_rejects_unknown_field(client):
    response = await client.post("/api/v1/simulate", json={"theta_deg": 90, "colour": "red"})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_simulate_rejects_short_grid(client):
    response = await client.post("/api/v1/simulate", json={"theta_deg": 90, "grid": "0:30:15"})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_tomography_self_calibrated(client, make_scan):
    payload = {"scan": make_scan(90).model_dump(mode="json"), "target": {"theta_deg": 90}}
    response = await client.post("/api/v1/tomography", json=payload)
    assert response.status_code == 200
    result = response.json()
    assert result["rho"][0][1]["re"] == pytest.approx(0.1, abs=1e-12)
    assert result["projection_applied"] is False
    assert 0.0 <= result["fidelity_to_target"] <= 1.0


@pytest.mark.asyncio
async def test_tomography_with_calibration_and_compensation(client, make_scan):
    payload = {
        "scan": make_scan(60, 45).model_dump(mode="json"),
        "calibration": make_scan(90).model_dump(mode="json"),
        "compensate_decay": 0.2,
        "target": {"theta_deg": 60, "phi_deg": 45},
    }
    response = await client.post("/api/v1/tomography", json=payload)
    assert response.status_code == 200
    assert response.json()["fidelity_to_target"] >= 0.9999


@pytest.mark.asyncio
async def test_tomography_degenerate_calibration(client, make_scan):
    payload = {
        "scan": make_scan(60).model_dump(mode="json"),
        "calibration": make_scan(0).model_dump(mode="json"),
    }
    response = await client.post("/api/v1/tomography", json=payload)
    assert response.status_code == 422
    assert response.json()["field"] == "calibration"


@pytest.mark.asyncio
async def test_batch_tomography(client, make_scan):
    payload = {
        "scans": [make_scan(t).model_dump(mode="json") for t in (0, 30, 60, 90)],
        "calibration": make_scan(90).model_dump(mode="json"),
    }
    response = await client.post("/api/v1/tomography/batch", json=payload)
    assert response.status_code == 200
    body = response.json()
    assert len(body["results"]) == 4
    assert body["projections"] == 0
    assert body["results"][0]["rho"][0][0]["re"] == pytest.approx(1.0, abs=1e-12)


@pytest.mark.asyncio
async def test_uncertainty_sweep(client):
    response = await client.post("/api/v1/uncertainty/sweep", json={"theta_deg": 90})
    assert response.status_code == 200
    body = response.json()
    assert len(body["reports"]) == 73
    assert body["min_slack"] == pytest.approx(0.0, abs=1e-9)


@pytest.mark.asyncio
async def test_uncertainty_sweep_with_matrix(client):
    half = {"re": 0.5, "im": 0.0}
    zero = {"re": 0.0, "im": 0.0}
    response = await client.post(
        "/api/v1/uncertainty/sweep", json={"rho": [[half, zero], [zero, half]], "grid": "0:90:45"}
    )
    assert response.status_code == 200
    assert [r["entropy_sum"] for r in response.json()["reports"]] == pytest.approx([2.0, 2.0, 2.0])


@pytest.mark.asyncio
async def test_uncertainty_rejects_unphysical_matrix(client):
    entries = [[{"re": 0.6, "im": 0.0}, {"re": 0.0, "im": 0.0}], [{"re": 0.0, "im": 0.0}, {"re": 0.6, "im": 0.0}]]
    response = await client.post("/api/v1/uncertainty/sweep", json={"rho": entries})
    assert response.status_code == 422
    assert "unit trace" in response.json()["detail"]


@pytest.mark.asyncio
async def test_uncertainty_needs_one_state(client):
    response = await client.post("/api/v1/uncertainty/sweep", json={})
    assert response.status_code == 422


@pytest.mark.asyncio
async def test_dynamics_nine_tesla(client):
    response = await client.post("/api/v1/dynamics", json={"b_field": 9.0})
    assert response.status_code == 200
    body = response.json()
    assert abs(body["rotation_deg"]) == pytest.approx(23.66, abs=0.05)
    assert body["contrast"] == pytest.approx(0.678, abs=0.001)
    assert len(body["pattern"]) == 25
    assert body["pattern"][0]["alpha_deg"] == 0.0


@pytest.mark.asyncio
async def test_dynamics_zero_field(client):
    response = await client.post("/api/v1/dynamics", json={"b_field": 0.0, "grid": "0:90:90"})
    assert response.status_code == 200
    intensities = [p["intensity"] for p in response.json()["pattern"]]
    assert intensities == pytest.approx([0.6, 0.4], abs=1e-12)
    assert math.isclose(response.json()["rotation_deg"], 0.0, abs_tol=1e-12)


def test_compute_routes_run_in_threadpool():
    compute = [r for r in app.routes if isinstance(r, APIRoute) and r.path.startswith("/api/v1/")]
    assert {r.path for r in compute} >= {"/api/v1/tomography", "/api/v1/tomography/batch", "/api/v1/dynamics"}
    assert not [r.path for r in compute if inspect.iscoroutinefunction(r.endpoint)]
