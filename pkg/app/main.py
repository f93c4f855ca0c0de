import logging

from fastapi import FastAPI, Request, status
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from app.api.v1 import api_router
from app.core.config import settings
from app.core.errors import PDBEPError
from app.core.events import lifespan

logger = logging.getLogger(__name__)

app = FastAPI(
    title=settings.PROJECT_NAME,
    description="Solvers and certificates for partial degree bounded edge packing",
    version=settings.VERSION,
    lifespan=lifespan,
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=settings.BACKEND_CORS_ORIGINS,
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.exception_handler(PDBEPError)
async def pdbep_error_handler(request: Request, exc: PDBEPError) -> JSONResponse:
    # exit code 2 marks bad input; anything else is a solver failure
    if exc.exit_code == 2:
        code = status.HTTP_400_BAD_REQUEST
    else:
        logger.error(f"{request.url.path}: {type(exc).__name__}: {exc}")
        code = status.HTTP_500_INTERNAL_SERVER_ERROR
    return JSONResponse(status_code=code, content={"detail": str(exc), "error": type(exc).__name__})


app.include_router(api_router, prefix=settings.API_V1_STR)


@app.get("/")
def root():
    return {"message": f"Welcome to {settings.PROJECT_NAME}"}
