import logging
from contextlib import asynccontextmanager
from typing import AsyncIterator, Optional

from fastapi import FastAPI

from app.core.config import settings

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def configure_logging(level: Optional[str] = None) -> None:
    logging.basicConfig(level=(level or settings.LOG_LEVEL).upper(), format=LOG_FORMAT)


@asynccontextmanager
async def lifespan(app: FastAPI) -> AsyncIterator[None]:
    configure_logging()
    logger.info(
        f"{settings.PROJECT_NAME} {settings.VERSION} starting "
        f"(oracle limit {settings.ORACLE_EDGE_LIMIT}, pivot rule {settings.PIVOT_RULE})"
    )
    yield
    logger.info(f"{settings.PROJECT_NAME} shutting down")
