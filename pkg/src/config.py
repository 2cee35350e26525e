"""
Environment settings

Values come from the process environment, optionally seeded from a .env file.
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        return default
    return value if value > 0 else default


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return float(raw)
    except ValueError:
        return default


@dataclass(frozen=True)
class Settings:
    threads: int
    fft_workers: int
    max_grid_points: int
    growth_threshold: float
    log_level: str

    @classmethod
    def from_env(cls) -> 'Settings':
        """Read settings from the environment"""
        return cls(
            threads=_int_env("RIESZ_LAB_THREADS", os.cpu_count() or 1),
            fft_workers=_int_env("RIESZ_LAB_FFT_WORKERS", 1),
            max_grid_points=_int_env("RIESZ_LAB_MAX_POINTS", 2 ** 24),
            growth_threshold=_float_env("RIESZ_LAB_GROWTH_THRESHOLD", 0.05),
            log_level=os.getenv("RIESZ_LAB_LOG_LEVEL", "WARNING").upper(),
        )


settings = Settings.from_env()
