"""Pytest configuration and shared fixtures."""

import math

import numpy as np
import pytest
from fastapi.testclient import TestClient

from tangle_response.linalg import make_rng
from tangle_response.models import SymParams
from tangle_response.server import TangleResponseServer


@pytest.fixture
def rng():
    """Seeded generator; every test sees the same stream."""
    return make_rng(1234, 0)


@pytest.fixture
def sym_params(rng):
    """Twenty random symmetric-state parameters."""
    u = rng.random((20, 3))
    return [
        SymParams(alpha=math.pi / 2 * a, beta=math.pi / 2 * b, gamma=math.pi / 2 * (2 * g - 1))
        for a, b, g in u
    ]


@pytest.fixture
def ghz_params():
    return SymParams(alpha=math.pi / 2, beta=math.pi / 4, gamma=0.0)


@pytest.fixture
def wbar_params():
    return SymParams(alpha=0.0, beta=0.0, gamma=0.0)


@pytest.fixture
def generic_params():
    return SymParams(alpha=math.pi / 3, beta=math.pi / 5, gamma=0.3)


@pytest.fixture
def test_server():
    """
    Create a server instance with a TestClient.

    Returns a tuple of (server_instance, test_client).
    """
    server = TangleResponseServer(port=5555)
    with TestClient(server.app) as client:
        yield server, client


@pytest.fixture
def httpx_client(test_server):
    """TestClient of the test server."""
    _, client = test_server
    return client


@pytest.fixture
def random_density(rng):
    """Factory for random full-rank density matrices of a given dimension."""
    def make(dim: int) -> np.ndarray:
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        rho = g @ g.conj().T
        return rho / np.trace(rho).real
    return make
