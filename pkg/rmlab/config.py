"""
Configuration management for the application.
"""
from pathlib import Path
from typing import Optional
from pydantic_settings import BaseSettings

PACKAGE_DIR = Path(__file__).resolve().parent


class Settings(BaseSettings):
    """Application settings loaded from environment variables (prefix ``RMLAB_``)."""

    # Application
    APP_TITLE: str = "rmlab"
    APP_VERSION: str = "1.0.0"
    APP_DESCRIPTION: str = "Rank-metric codes, scattered linear sets and their correspondence"

    # Enumeration limits
    BUDGET: int = 2 ** 24  # rank computations
    VECTOR_BUDGET: int = 2 ** 24  # subspace vectors / enumerated subspaces / group elements
    CHUNK_SIZE: int = 4096  # rows per vectorized batch
    WORKERS: int = 1

    # Fields
    MODULI: Optional[str] = None  # path to a JSON modulus table overriding the packaged one
    TABLE_LIMIT: int = 2 ** 16  # largest field order with a precomputed coordinate table

    # Output
    FORMAT: str = "text"  # "text" or "json"

    # Acceptance suites
    FIXTURES_DIR: Optional[str] = None

    @property
    def moduli_path(self) -> Path:
        """Resolve the modulus table: the override if set, else the packaged default."""
        if self.MODULI:
            return Path(self.MODULI).expanduser()
        return PACKAGE_DIR / "data" / "moduli.json"

    @property
    def fixtures_path(self) -> Path:
        """Directory holding the acceptance suites."""
        if self.FIXTURES_DIR:
            return Path(self.FIXTURES_DIR).expanduser()
        return PACKAGE_DIR / "data" / "acceptance"

    class Config:
        env_prefix = "RMLAB_"
        env_file = ".env"
        case_sensitive = False


# Global settings instance
settings = Settings()
