"""
LogJet - Configuration Settings
Pydantic Settings read from LOGJET_* environment variables and .env
"""

from pathlib import Path
from typing import Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings

CONFIG_DIR = Path(__file__).parent


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    # Verification suites
    seed: int = Field(default=1)
    verify_size: str = Field(default="small")  # small | medium

    # Fermat families
    families_dir: Path = Field(default=CONFIG_DIR / "families")
    example_family: str = Field(default="example.fam")
    plucker_subset_limit: int = Field(default=20)  # index subsets checked per family

    # Logging
    log_level: str = Field(default="INFO")
    log_json_format: bool = Field(default=False)
    log_file: Optional[Path] = Field(default=None)

    class Config:
        env_prefix = "LOGJET_"
        env_file = ".env"  # read through python-dotenv
        env_file_encoding = "utf-8"
        case_sensitive = False
        extra = "ignore"

    @field_validator("verify_size")
    @classmethod
    def check_size(cls, v: str) -> str:
        if v not in ("small", "medium"):
            raise ValueError(f"verify_size must be small or medium, got {v!r}")
        return v

    @field_validator("plucker_subset_limit")
    @classmethod
    def check_limit(cls, v: int) -> int:
        if v < 1:
            raise ValueError("plucker_subset_limit must be at least 1")
        return v

    @property
    def example_family_path(self) -> Path:
        """Bundled example family file."""
        return self.families_dir / self.example_family


# Singleton instance
settings = Settings()
