"""Configuration management for chartnotes."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Compiler settings loaded from environment variables."""

    model_config = SettingsConfigDict(
        env_prefix="CHARTNOTES_",
        env_file=".env",
        case_sensitive=False,
        extra="ignore",
    )

    # Placement
    grid_size: int = 4
    placement_budget: int = 10000
    anchor_gap: float = 4.0
    ring_gap: float = 16.0

    # Chart core
    tick_count: int = 5
    band_padding: float = 0.1

    # Annotations
    enclosure_padding: float = 4.0
    assembly_round_limit: int = 10

    # Logging
    log_level: str = "WARNING"


# Global settings instance
settings = Settings()
