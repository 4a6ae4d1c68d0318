"""
工具模块 - 通用工具函数

提供配置读取、日志配置与产物文件读写等通用工具
"""

from .config_utils import deep_merge, mk_logs_path, read_config, setup_logging
from .file_utils import (
    DATASET_MANIFEST_SCHEMA,
    RUN_MANIFEST_SCHEMA,
    atomic_write_json,
    calculate_file_hash,
    read_csv,
    read_json,
    validate_payload,
    write_csv,
)

__all__ = [
    "DATASET_MANIFEST_SCHEMA",
    "RUN_MANIFEST_SCHEMA",
    "atomic_write_json",
    "calculate_file_hash",
    "deep_merge",
    "mk_logs_path",
    "read_config",
    "read_csv",
    "read_json",
    "setup_logging",
    "validate_payload",
    "write_csv",
]
