from typing import Any, List

from fastapi import APIRouter, Depends, HTTPException, status

from app.api.dependencies.dependencies import get_settings
from app.core.config import Settings
from app.models.lp import GapRow
from app.models.report import GapRequest
from app.services.lp import gap_demo

router = APIRouter()

MAX_GAP_N = 40


@router.post("", response_model=List[GapRow])
def gap(
    *,
    config: Settings = Depends(get_settings),
    request: GapRequest,
) -> Any:
    """
    Natural relaxation value against the integer optimum on K_n with unit bounds.
    """
    too_large = [n for n in request.sizes if n > MAX_GAP_N]
    if too_large:
        raise HTTPException(
            status_code=status.HTTP_400_BAD_REQUEST,
            detail=f"Sizes above {MAX_GAP_N} are only available from the command line: {too_large}",
        )
    return [gap_demo(n, oracle_limit=config.ORACLE_EDGE_LIMIT) for n in request.sizes]
