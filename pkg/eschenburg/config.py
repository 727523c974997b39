from typing import Literal, Optional
from pydantic import BaseModel, Field, ValidationError
from pathlib import Path
import os
import tomli
from loguru import logger

from .errors import ConfigError


class SearchSettings(BaseModel):
    """搜索配置"""

    threads: int = Field(default=1, ge=1)
    block_size: int = Field(default=1000, ge=1)
    checkpoint_dir: str = ""
    output_format: Literal["csv", "json"] = "csv"
    progress: bool = True


class LensSettings(BaseModel):
    """透镜空间三角和的精度配置"""

    guard_bits: int = Field(default=64, ge=16)
    bits_per_log2_p: int = Field(default=6, ge=1)
    max_doublings: int = Field(default=4, ge=0)
    residual_bits: int = Field(default=20, ge=4)
    cache_size: int = Field(default=4096, ge=0)


class LoggingSettings(BaseModel):
    """日志配置"""

    level: str = "INFO"
    format: str = (
        "<green>{time:HH:mm:ss}</green> | <level>{level: <7}</level> | {message}"
    )


class Config(BaseModel):
    search: SearchSettings = SearchSettings()
    lens: LensSettings = LensSettings()
    logging: LoggingSettings = LoggingSettings()

    @classmethod
    def load_config(cls, config_path: Optional[Path] = None) -> "Config":
        """从 config.toml 加载配置"""
        if config_path is None:
            root_path = Path(__file__).resolve().parents[1]
            config_path = root_path / "config.toml"

        toml_config: dict = {}
        if config_path.exists():
            try:
                with open(config_path, "rb") as f:
                    toml_config = tomli.load(f)
            except tomli.TOMLDecodeError as e:
                raise ConfigError(f"TOML parsing error in {config_path}: {e}")
        else:
            logger.debug(f"{config_path} not found, using defaults")

        try:
            search_config = SearchSettings(**toml_config.get("search", {}))
            lens_config = LensSettings(**toml_config.get("lens", {}))
            logging_config = LoggingSettings(**toml_config.get("logging", {}))
        except ValidationError as e:
            raise ConfigError(f"Invalid value in {config_path}: {e}")

        env_threads = os.environ.get("ESCH_THREADS")
        if env_threads:
            try:
                search_config.threads = max(1, int(env_threads))
            except ValueError:
                raise ConfigError(f"ESCH_THREADS must be an integer, got {env_threads!r}")

        return cls(search=search_config, lens=lens_config, logging=logging_config)


settings = Config.load_config()
