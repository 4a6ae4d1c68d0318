import os
from abc import ABC, abstractmethod
from typing import Dict, Mapping, Optional, Tuple

from dotenv import load_dotenv


class BaseConfig(ABC):
    """Configuration read from the environment and .env

    Subclasses declare ``env_prefix`` and the ``env_keys`` they read. Values passed
    as ``overrides`` take precedence over the process environment, which is how a
    recorded run is replayed under its original environment.
    """

    env_prefix: str = ""
    env_keys: Tuple[str, ...] = ()

    def __init__(self, overrides: Optional[Mapping[str, Optional[str]]] = None):
        self._overrides = dict(overrides or {})
        self._load_environment()

    def _load_environment(self):
        """Load environment variables - can be overridden by subclasses"""
        load_dotenv()

    @abstractmethod
    def validate(self) -> bool:
        """Validate the configuration"""

    def env_name(self, key: str) -> str:
        return key if key.startswith(self.env_prefix) else f"{self.env_prefix}{key}"

    def _get_env_var(self, key: str, default: Optional[str] = None) -> Optional[str]:
        name = self.env_name(key)
        if name in self._overrides:
            value = self._overrides[name]
            return default if value is None else value
        return os.getenv(name, default)

    def _get_env_int(self, key: str, default: int) -> int:
        value = self._get_env_var(key)
        if value is None or value.strip() == "":
            return default
        try:
            return int(value)
        except ValueError:
            raise ValueError(f"{self.env_name(key)} must be an integer, got {value!r}")

    def snapshot(self) -> Dict[str, Optional[str]]:
        """Current raw values of every declared key, None when unset"""
        return {self.env_name(k): self._get_env_var(k) for k in self.env_keys}
