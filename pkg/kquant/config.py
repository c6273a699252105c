from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from kquant.constants import DEFAULT_CHUNK_SIZE, DEFAULT_WEYL_ORDER


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_prefix="KQ_")

    threads: int = Field(default=1, ge=1)
    chunk_size: int = Field(default=DEFAULT_CHUNK_SIZE, ge=1)
    weyl_hbar_order: int = Field(default=DEFAULT_WEYL_ORDER, ge=1)
    connected_only: bool = True
    log_level: str = "WARNING"


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()
