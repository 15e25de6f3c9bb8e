"""
Runtime settings for KlSpark.

Values come from the environment (a `.env` file is loaded by `main.py`).
"""

import os
from typing import Optional

from pydantic import BaseModel, Field


def _env_int(name: str, default: int) -> int:
    value = os.getenv(name)
    if value is None or value == "":
        return default
    return int(float(value))


class Settings(BaseModel):
    """Process-wide settings."""
    threads: int = Field(default=1, ge=1, description="Worker threads for trace tables")
    chunk_size: int = Field(default=1 << 16, ge=1, description="Projective points per enumeration chunk")
    results_dir: str = Field(default="results", description="Directory for result files")
    euler_budget: int = Field(default=60_000_000, ge=1, description="Point budget of one Euler estimate")
    seed: int = Field(default=0, description="Default seed for modulus and functional searches")
    host: str = Field(default="0.0.0.0", description="Service bind address")
    port: int = Field(default=8000, description="Service port")
    log_level: str = Field(default="INFO", description="Logging level name")

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings from KLSPARK_* environment variables."""
        return cls(
            threads=_env_int("KLSPARK_THREADS", os.cpu_count() or 1),
            chunk_size=_env_int("KLSPARK_CHUNK_SIZE", 1 << 16),
            results_dir=os.getenv("KLSPARK_RESULTS_DIR", "results"),
            euler_budget=_env_int("KLSPARK_EULER_BUDGET", 60_000_000),
            seed=_env_int("KLSPARK_SEED", 0),
            host=os.getenv("KLSPARK_HOST", "0.0.0.0"),
            port=_env_int("KLSPARK_PORT", 8000),
            log_level=os.getenv("LOG_LEVEL", "INFO").upper(),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Return the cached process settings."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings
