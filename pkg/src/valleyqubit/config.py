from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Core
    ENVIRONMENT: str = "development"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Output
    OUTPUT_DIR: Optional[Path] = None

    # Batch tomography fan-out
    WORKER_POOL_SIZE: int = 4

    class Config:
        env_file = ".env"
        env_prefix = "VALLEYQUBIT_"
        case_sensitive = True
        extra = "ignore"


settings = Settings()
