"""
配置管理工具函数
"""

import copy
import sys
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from loguru import logger

DEFAULT_CONFIG_PATH = Path(__file__).parent.parent / "config" / "default.yaml"
LOG_FORMAT = "{time:YYYY-MM-DD HH:mm:ss} | {level} | {message}"


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    """递归合并字典，override 中的值优先"""
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def read_config(override_path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """读取默认配置文件，并合并可选的覆盖配置"""
    with open(DEFAULT_CONFIG_PATH, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f) or {}
    if override_path:
        with open(override_path, "r", encoding="utf-8") as f:
            override = yaml.safe_load(f) or {}
        if not isinstance(override, dict):
            raise ValueError(f"配置文件 {override_path} 顶层必须是映射")
        config = deep_merge(config, override)
    return config


def mk_logs_path(base_dir: Union[str, Path]) -> Path:
    """创建日志目录"""
    log_path = Path(base_dir) / "logs"
    log_path.mkdir(parents=True, exist_ok=True)
    return log_path


def setup_logging(base_dir: Union[str, Path], level: str = "INFO") -> Path:
    """配置日志：stderr 加按日期命名的文件

    Returns:
        日志文件路径
    """
    log_file = mk_logs_path(base_dir) / f"{datetime.now().strftime('%Y-%m-%d')}.log"
    logger.remove()
    logger.add(sys.stderr, format=LOG_FORMAT, level=level)
    logger.add(str(log_file), enqueue=True, format=LOG_FORMAT, level=level)
    return log_file
