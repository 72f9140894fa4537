"""Integration tests for server API endpoints."""

import math

import pytest

from tangle_response import __version__


@pytest.mark.integration
class TestServerAPI:
    """HTTP endpoints backed by the real computations."""

    def test_health_endpoint(self, httpx_client):
        """GET /health returns 200 with status and version."""
        response = httpx_client.get("/health")

        assert response.status_code == 200
        data = response.json()
        assert data["status"] == "ok"
        assert data["version"] == __version__
        assert data["uptime"] >= 0

    def test_report_endpoint(self, httpx_client):
        """POST /report returns the response of a symmetric state."""
        response = httpx_client.post("/report", json={"alpha": 0.0, "beta": 0.0})

        assert response.status_code == 200
        data = response.json()
        assert data["eta"] == pytest.approx(4 / 3, abs=1e-10)
        assert data["params"]["gamma"] == 0.0

    def test_report_validation(self, httpx_client):
        """Out-of-range angles are rejected by the model."""
        response = httpx_client.post("/report", json={"alpha": 3.0, "beta": 0.0})
        assert response.status_code == 422

    def test_request_counter(self, test_server):
        server, client = test_server
        client.post("/report", json={"alpha": 0.5, "beta": 0.5})
        client.post("/report", json={"alpha": 0.6, "beta": 0.5})
        assert server.request_count == 2
        assert client.get("/health").json()["requests"] == 2

    def test_critical_endpoint(self, httpx_client):
        response = httpx_client.post("/critical", json={"family": "G", "beta": math.pi / 4})

        assert response.status_code == 200
        data = response.json()
        assert data["family"] == "G"
        assert data["avg_decay"] == pytest.approx(4.0, abs=1e-8)

    def test_critical_missing_param(self, httpx_client):
        response = httpx_client.post("/critical", json={"family": "J", "beta": 0.3})
        assert response.status_code == 422
        assert "alpha" in response.json()["detail"]

    def test_critical_boundary_param(self, httpx_client):
        response = httpx_client.post("/critical", json={"family": "J", "alpha": 0.0})
        assert response.status_code == 422

    def test_roof_endpoint(self, httpx_client):
        response = httpx_client.post("/roof", json={"state": "2q:0.5", "q": 0.2, "restarts": 2})

        assert response.status_code == 200
        data = response.json()
        assert data["schema"] == "tangle-response/1"
        assert data["gap"] == pytest.approx(data["ansatz"] - data["oracle"])

    def test_roof_bad_spec(self, httpx_client):
        response = httpx_client.post("/roof", json={"state": "3q:0.1", "q": 0.2})
        assert response.status_code == 422

    def test_roof_ensemble_below_rank(self, httpx_client):
        response = httpx_client.post("/roof", json={"state": "2q:0.5", "q": 0.2, "m": 2})
        assert response.status_code == 422
        assert "rank" in response.json()["detail"]
