from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from loguru import logger

from ..utils.config_utils import read_config
from .base import BaseConfig

LOG_LEVELS = ("TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL")


class ToolkitConfig(BaseConfig):
    """Toolkit configuration

    Environment variables:
        GSD_OUTPUT_DIR: default output directory for CLI runs (./runs)
        GSD_LOG_LEVEL: log level (INFO)
        GSD_CONFIG: optional YAML merged over the packaged defaults
        GSD_DENSE_CAP: node limit for dense oracle computations (2000)
    """

    env_prefix = "GSD_"
    env_keys = ("OUTPUT_DIR", "LOG_LEVEL", "CONFIG", "DENSE_CAP")

    def __init__(self, overrides: Optional[Mapping[str, Optional[str]]] = None):
        super().__init__(overrides)
        self._settings: Optional[Dict[str, Any]] = None

    def validate(self) -> bool:
        """Validate the configuration"""
        if self.get_log_level() not in LOG_LEVELS:
            logger.error(f"GSD_LOG_LEVEL must be one of {LOG_LEVELS}")
            return False
        config_path = self.get_config_path()
        if config_path is not None and not config_path.is_file():
            logger.error(f"GSD_CONFIG points to a missing file: {config_path}")
            return False
        try:
            cap = self.get_dense_cap()
        except ValueError:
            logger.error("GSD_DENSE_CAP must be an integer")
            return False
        if cap < 1:
            logger.error("GSD_DENSE_CAP must be positive")
            return False
        return True

    def get_output_dir(self) -> Path:
        return Path(self._get_env_var("OUTPUT_DIR", "./runs"))

    def get_log_level(self) -> str:
        return self._get_env_var("LOG_LEVEL", "INFO").upper()

    def get_config_path(self) -> Optional[Path]:
        value = self._get_env_var("CONFIG")
        return Path(value) if value else None

    def get_dense_cap(self, settings: Optional[Dict[str, Any]] = None) -> int:
        """GSD_DENSE_CAP 优先，否则取配置中的 oracle.dense_cap"""
        settings = self.settings() if settings is None else settings
        settings_cap = settings.get("oracle", {}).get("dense_cap", 2000)
        return self._get_env_int("DENSE_CAP", int(settings_cap))

    def settings(self) -> Dict[str, Any]:
        """Packaged defaults deep-merged with the GSD_CONFIG file, cached"""
        if self._settings is None:
            self._settings = read_config(self.get_config_path())
        return self._settings
