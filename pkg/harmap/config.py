"""
Runtime configuration

Settings come from the environment (optionally a .env file in the working
directory):

    HMAP_TRUNC_ORDER       default truncation order of catalog series (64)
    HMAP_THETA_GRID        angles per circle in the radius tests (4096)
    HMAP_CROSSCHECK_ORDER  series order for convolution cross-checks (512)
    HMAP_LOG_LEVEL         logging level for the CLI (WARNING)
"""

import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, ValidationError

from .errors import ConfigError

# Configuration defaults
DEFAULT_TRUNC_ORDER = 64
DEFAULT_THETA_GRID = 4096
DEFAULT_CROSSCHECK_ORDER = 512

# Closed-form evaluators always take over beyond this radius
SERIES_RADIUS = 0.7
# Relative truncation error allowed wherever a series is evaluated
SERIES_TOL = 1e-9
# Lowest order at which catalog series agree with their closed forms on |z| <= 0.5
MIN_TRUNC_ORDER = 56


class Settings(BaseModel):
    trunc_order: int = Field(default=DEFAULT_TRUNC_ORDER, ge=MIN_TRUNC_ORDER, description="Truncation order N")
    theta_grid: int = Field(default=DEFAULT_THETA_GRID, ge=64, description="Angles per circle")
    crosscheck_order: int = Field(default=DEFAULT_CROSSCHECK_ORDER, ge=384, description="Series order accurate up to r = 0.9")
    log_level: str = Field(default="WARNING")


def _read(name: str) -> Optional[str]:
    value = os.getenv(name)
    if value is None or value.strip() == "":
        return None
    return value.strip()


def load_settings(env_path: Optional[str] = None) -> Settings:
    """Load settings from the environment, after reading ``.env`` if present."""
    load_dotenv(env_path)
    raw = {
        "trunc_order": _read("HMAP_TRUNC_ORDER"),
        "theta_grid": _read("HMAP_THETA_GRID"),
        "crosscheck_order": _read("HMAP_CROSSCHECK_ORDER"),
        "log_level": _read("HMAP_LOG_LEVEL"),
    }
    try:
        return Settings(**{k: v for k, v in raw.items() if v is not None})
    except ValidationError as e:
        raise ConfigError(f"invalid HMAP_* setting: {e}") from e
