"""
Configuration management using Pydantic Settings.
Loads from environment variables (prefix WHITEHEAD_) and an optional .env file.
"""
from typing import Literal, Optional

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Toolkit settings loaded from environment variables."""

    # Application
    app_name: str = "whitehead"
    log_level: str = "INFO"

    # Enumeration
    poset_cap: int = 500_000
    jobs: int = 1

    # Property tests
    seed: int = 0
    property_trials: int = 100

    # Cache
    cache_backend: Literal["none", "file", "redis"] = "none"
    cache_dir: Optional[str] = None

    # Redis
    redis_host: str = "localhost"
    redis_port: int = 6379
    redis_password: str = ""
    redis_db: int = 0
    redis_cache_ttl: int = 0  # seconds, 0 keeps entries forever

    @property
    def redis_url(self) -> str:
        """Build Redis connection URL."""
        if self.redis_password:
            return f"redis://:{self.redis_password}@{self.redis_host}:{self.redis_port}/{self.redis_db}"
        return f"redis://{self.redis_host}:{self.redis_port}/{self.redis_db}"

    class Config:
        env_file = ".env"
        env_prefix = "WHITEHEAD_"
        case_sensitive = False


# Global settings instance
settings = Settings()
