"""Application configuration."""

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    PROJECT_NAME: str = "LLO CV-QKD Key Rate"

    # Monte Carlo
    CVQKD_SEED: int = 20220531
    MC_DEFAULT_SAMPLES: int = 1_000_000
    MC_MIN_SAMPLES: int = 10_000
    MC_MIN_PROTOCOL_SAMPLES: int = 100_000
    MC_PARTITIONS: int = 8
    MC_JACKKNIFE_GROUPS: int = 200
    MC_WORKERS: int = 1
    ORACLE_SIGMA: float = 3.0

    # Sweeps
    SWEEP_WORKERS: int = 1
    MAX_DISTANCE_TOL_KM: float = 0.01

    # Phase-reference intensity monitor (relative deviation)
    INTENSITY_ALARM_THRESHOLD: float = 0.10

    # Output
    CSV_FLOAT_FORMAT: str = ".12g"

    # Logging
    LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")


settings = Settings()
