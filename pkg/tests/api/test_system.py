from fastapi.testclient import TestClient

from app.core.events import lifespan
from app.main import app


def test_health(client):
    response = client.get("/api/v1/system/health")

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "ok"
    # overridden in conftest
    assert data["oracle_edge_limit"] == 16
    assert data["pivot_rule"] in ("bland", "dantzig")


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert "PDBEP" in response.json()["message"]


async def test_lifespan_configures_logging(mocker):
    configure = mocker.patch("app.core.events.configure_logging")
    async with lifespan(app):
        configure.assert_called_once_with()


def test_client_runs_the_lifespan(mocker):
    configure = mocker.patch("app.core.events.configure_logging")
    with TestClient(app) as client:
        assert client.get("/").status_code == 200
    configure.assert_called_once_with()
