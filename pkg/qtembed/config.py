"""
Runtime configuration.

Settings are read from environment variables, falling back to defaults
suitable for a developer laptop.
"""

from functools import lru_cache
from os import getenv

from pydantic import BaseModel


def _flag(name: str) -> bool:
    return getenv(name, "0").strip().lower() in {"1", "true", "yes", "on"}


class Settings(BaseModel):
    """
    Process-wide settings.

    Attributes:
        ci: CI mode; randomized commands then require an explicit seed
        log_level: Minimum level of emitted log events
        log_json: Render log events as JSON lines instead of key=value
        tol_eq: Default equality tolerance of the verification harness
        tol_sep: Default separation threshold of the verification harness
        samples: Default number of trials per verification check
        seed: Seed used outside CI mode when none is given
    """

    ci: bool = False
    log_level: str = "WARNING"
    log_json: bool = False
    tol_eq: float = 1e-9
    tol_sep: float = 1e-6
    samples: int = 200
    seed: int = 0


@lru_cache
def get_settings() -> Settings:
    """Get settings from environment variables."""
    return Settings(
        ci=_flag("QTEMBED_CI"),
        log_level=getenv("QTEMBED_LOG_LEVEL", "WARNING").upper(),
        log_json=_flag("QTEMBED_LOG_JSON"),
        tol_eq=float(getenv("QTEMBED_TOL_EQ", "1e-9")),
        tol_sep=float(getenv("QTEMBED_TOL_SEP", "1e-6")),
        samples=int(getenv("QTEMBED_SAMPLES", "200")),
    )
