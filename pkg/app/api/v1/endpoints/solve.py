import logging
from typing import Any

from fastapi import APIRouter, Depends, HTTPException, status

from app.api.dependencies.dependencies import get_settings
from app.core.config import Settings
from app.core.errors import InstanceParseError
from app.models.report import RunReport, SolveRequest
from app.services.graph_core import parse_instance
from app.services.runner import run

logger = logging.getLogger(__name__)

router = APIRouter()


@router.post("", response_model=RunReport)
def solve(
    *,
    config: Settings = Depends(get_settings),
    request: SolveRequest,
) -> Any:
    """
    Solve an instance given in the text format and return the certified report.
    """
    try:
        inst = parse_instance(request.instance)
    except InstanceParseError as e:
        raise HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=f"Invalid instance: {e}")
    logger.info(f"solve request: alg={request.alg} n={inst.n} m={inst.m}")
    return run(
        inst,
        request.alg,
        eps=request.eps,
        order=request.order,
        root=request.root,
        relabel_seed=request.relabel_seed,
        oracle_limit=config.ORACLE_EDGE_LIMIT,
    )
