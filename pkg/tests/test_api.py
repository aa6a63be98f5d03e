import numpy as np
import pytest
from fastapi.testclient import TestClient

from knotpursuit.api import create_app
from knotpursuit.models.store import model_to_json

from tests.conftest import circle_points


@pytest.fixture
def client():
    with TestClient(create_app()) as test_client:
        yield test_client


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json() == {"status": "ok"}


def test_vca_endpoint(client):
    response = client.post("/models/vca", json={"points": circle_points(8).tolist(), "epsilon": 0.1})
    assert response.status_code == 200
    record = response.json()
    assert record["method"] == "vca"
    assert record["knots"] is None
    assert record["registry"]["n_points"] == 8


def test_fit_endpoint_returns_knots(client):
    points = circle_points(8).tolist()
    response = client.post("/models/fit", json={"points": points, "epsilon": 0.1, "delta": 1e-6})
    assert response.status_code == 200
    record = response.json()
    assert record["method"] == "knot_pursuit"
    assert np.allclose(record["knots"], points, atol=1e-8)
    assert record["config"]["epsilon"] == 0.1


def test_fit_rejects_delta_above_epsilon(client):
    response = client.post("/models/fit", json={"points": [[0.0, 0.0], [1.0, 1.0]], "epsilon": 0.1, "delta": 0.5})
    assert response.status_code == 400


def test_fit_rejects_ragged_points(client):
    response = client.post("/models/vca", json={"points": [[0.0, 0.0], [1.0]]})
    assert response.status_code == 400


def test_evaluate_endpoint(client, circle_model):
    response = client.post(
        "/models/evaluate",
        json={"model": model_to_json(circle_model), "points": [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]]},
    )
    assert response.status_code == 200
    body = response.json()
    assert body["degrees"] == [2]
    assert np.allclose(body["values"], [[-1.0], [0.0], [3.0]])
    assert np.allclose(body["features"], [[1.0], [0.0], [3.0]])


def test_evaluate_rejects_dimension_mismatch(client, circle_model):
    response = client.post(
        "/models/evaluate",
        json={"model": model_to_json(circle_model), "points": [[0.0, 0.0, 0.0]]},
    )
    assert response.status_code == 400
