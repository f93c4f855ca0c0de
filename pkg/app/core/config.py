import os
from fractions import Fraction
from typing import Literal

from pydantic_settings import BaseSettings
from dotenv import load_dotenv

load_dotenv()

class Settings(BaseSettings):
    PROJECT_NAME: str = "PDBEP API"
    VERSION: str = "0.1.0"
    API_V1_STR: str = "/api/v1"

    # CORS
    BACKEND_CORS_ORIGINS: list[str] = ["*"]

    # Logging
    LOG_LEVEL: str = os.environ.get("LOG_LEVEL", "INFO")

    # Oracle
    ORACLE_EDGE_LIMIT: int = 24
    ORACLE_PRUNING: bool = True

    # Iterative rounding
    DEFAULT_EPS: str = "1/100"

    # Simplex
    PIVOT_RULE: Literal["dantzig", "bland"] = "dantzig"
    DEGENERATE_PIVOT_LIMIT: int = 25

    # Tree solver
    TREE_DEFAULT_ROOT: int = 0
    TREE_SOFT_SECONDS: float = 10.0

    # Harness
    CERTIFY_WORKERS: int = 1
    REPORT_SCHEMA_VERSION: str = "1"

    class Config:
        env_file = ".env"
        case_sensitive = True

    @property
    def default_eps(self) -> Fraction:
        return Fraction(self.DEFAULT_EPS)

settings = Settings()
