from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """Application settings loaded from environment variables."""

    precision_bits: int = 128
    max_precision_bits: int = 1 << 20
    exact_bits_cap: int = 100_000_000
    entropy_tolerance: float = 1e-10
    quadrature_dps: int = 30
    quadrature_max_degree: int = 8
    oracle_vertex_limit: int = 200
    log_level: str = "WARNING"

    class Config:
        env_file = ".env"
        env_prefix = "TREECOUNT_"
        case_sensitive = False


settings = Settings()
