# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Runtime configuration using Pydantic Settings.
"""

import os
from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Settings loaded from LISTHYP_* environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="LISTHYP_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    debug: bool = False

    # Worker pool size for per-instance / per-q_y work (LISTHYP_THREADS).
    # None or a non-positive value means "use available parallelism".
    threads: Optional[int] = None

    # Oracle caps: 2^20 deterministic tests, 10^5 (subset, outcome) mass points
    oracle_max_tests_log2: int = 20
    oracle_max_mass_points: int = 100_000

    # Largest outcome alphabet the product-channel generator will build
    max_outcomes: int = 1_000_000

    @property
    def worker_count(self) -> int:
        """Effective worker pool size."""
        if self.threads is not None and self.threads > 0:
            return self.threads
        return os.cpu_count() or 1


@lru_cache
def get_settings() -> Settings:
    """Get cached settings instance."""
    return Settings()


settings = get_settings()
