import pytest
from fastapi.testclient import TestClient

from app.main import app
from app.api.dependencies.dependencies import get_settings
from app.core.config import Settings
from tests.factories import create_path, create_star, create_triangle


@pytest.fixture
def tri():
    """Triangle, every bound 1."""
    return create_triangle()


@pytest.fixture
def star4():
    """Star with center 0 and four leaves, every bound 1."""
    return create_star(4)


@pytest.fixture
def path3():
    """Path 0-1-2, every bound 1."""
    return create_path(3)


@pytest.fixture
def path3w():
    """Path 0-1-2 with w(01) = 3, w(12) = 1, every bound 1."""
    return create_path(3, weights=[3, 1])


@pytest.fixture
def test_settings():
    """
    Settings with a small oracle limit so API tests stay fast.
    """
    return Settings(ORACLE_EDGE_LIMIT=16, LOG_LEVEL="DEBUG")


@pytest.fixture
def client(test_settings):
    """
    Create a FastAPI test client with the settings dependency overridden.
    """
    app.dependency_overrides[get_settings] = lambda: test_settings

    with TestClient(app) as test_client:
        yield test_client

    # Clear the dependency overrides after the test
    app.dependency_overrides.clear()
