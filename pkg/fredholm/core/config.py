from pydantic_settings import BaseSettings, SettingsConfigDict
from typing import Optional
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

class Settings(BaseSettings):
    # Application settings
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    # Output settings
    FREDHOLM_OUT: Optional[str] = None
    DEFAULT_OUTPUT_DIR: str = "outputs"

    # Solver defaults
    DEFAULT_QUAD_ORDER: int = 32
    DEFAULT_MAX_ITER: int = 50

    model_config = SettingsConfigDict(case_sensitive=True, extra="ignore")

def get_settings() -> Settings:
    """Build settings from the current environment"""
    return Settings()
