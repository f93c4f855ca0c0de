from typing import Any

from fastapi import APIRouter, Depends

from app.api.dependencies.dependencies import get_settings
from app.core.config import Settings
from app.models.base import FrozenModel

router = APIRouter()


class HealthRead(FrozenModel):
    status: str
    version: str
    oracle_edge_limit: int
    pivot_rule: str


@router.get("/health", response_model=HealthRead)
def health(config: Settings = Depends(get_settings)) -> Any:
    """
    Liveness check with the solver settings in effect.
    """
    return HealthRead(
        status="ok",
        version=config.VERSION,
        oracle_edge_limit=config.ORACLE_EDGE_LIMIT,
        pivot_rule=config.PIVOT_RULE,
    )
