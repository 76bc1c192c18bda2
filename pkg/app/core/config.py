from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    """
    Application settings loaded from environment variables
    """
    # Application
    app_name: str = "Klein Verification Toolkit"
    version: str = "1.0.0"
    debug: bool = False
    host: str = "0.0.0.0"
    port: int = 8000
    log_level: str = "INFO"

    # Data files
    fixtures_dir: str = "fixtures"
    cache_dir: str = ".table_cache"
    constants_file: str = "fixtures/codata2014.json"

    # Randomized property checks
    default_seed: int = 20160101
    property_trials: int = 1000

    # Computation caps
    enumeration_cap: int = 10 ** 6
    subgroup_search_cap: int = 20000
    character_table_max_order: int = 10 ** 4

    class Config:
        env_file = ".env"
        case_sensitive = False


# Create settings instance
settings = Settings()
