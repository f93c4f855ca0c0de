from fastapi import APIRouter
from app.api.v1.endpoints import system, solve, instances, gap

api_router = APIRouter()
api_router.include_router(system.router, prefix="/system", tags=["system"])
api_router.include_router(solve.router, prefix="/solve", tags=["solve"])
api_router.include_router(instances.router, prefix="/instances", tags=["instances"])
api_router.include_router(gap.router, prefix="/gap", tags=["gap"])
