from .base import BaseConfig
from .toolkit import ToolkitConfig

__all__ = ["BaseConfig", "ToolkitConfig"]
