from app.core.config import Settings, settings


def get_settings() -> Settings:
    """Settings provider; tests override it through `app.dependency_overrides`."""
    return settings
