"""
文件处理工具函数 - CSV/JSON 产物写出、校验和与 JSON Schema 校验
"""

import csv
import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Sequence, Union

from jsonschema import ValidationError, validate
from loguru import logger

from ..exceptions import ManifestError

RUN_MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["command", "argv", "config", "seeds", "version", "outputs", "duration_seconds", "status"],
    "properties": {
        "command": {"type": "string", "minLength": 1},
        "argv": {"type": "array", "items": {"type": "string"}},
        "config": {"type": "object"},
        "seeds": {"type": "array", "items": {"type": "integer"}},
        "version": {"type": "string"},
        "outputs": {"type": "array", "items": {"type": "string"}},
        "duration_seconds": {"type": "number", "minimum": 0},
        "status": {"enum": ["ok", "error"]},
        "error": {
            "type": ["object", "null"],
            "required": ["type", "message"],
            "properties": {
                "type": {"type": "string"},
                "message": {"type": "string"},
            },
        },
    },
}

DATASET_MANIFEST_SCHEMA = {
    "type": "object",
    "required": ["name", "files", "num_nodes", "num_edges", "num_classes", "num_features"],
    "properties": {
        "name": {"type": "string"},
        "files": {
            "type": "object",
            "additionalProperties": {
                "type": "object",
                "required": ["path", "sha256"],
                "properties": {
                    "path": {"type": "string"},
                    "sha256": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
                },
            },
        },
        "num_nodes": {"type": "integer", "minimum": 0},
        "num_edges": {"type": "integer", "minimum": 0},
        "num_classes": {"type": "integer", "minimum": 0},
        "num_features": {"type": "integer", "minimum": 0},
        "metadata": {"type": "object"},
    },
}


def calculate_file_hash(path: Union[str, Path]) -> str:
    """计算文件SHA256哈希值"""
    digest = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 20), b""):
            digest.update(block)
    return digest.hexdigest()


def validate_payload(payload: Any, schema: Dict[str, Any], name: str = "payload") -> None:
    """按 JSON Schema 校验

    Raises:
        ManifestError: 校验失败
    """
    try:
        validate(instance=payload, schema=schema)
        logger.debug(f"{name} validation successful")
    except ValidationError as e:
        logger.warning(f"{name} validation failed: {e.message}")
        raise ManifestError(f"{name} invalid: {e.message}") from e


def atomic_write_json(path: Union[str, Path], payload: Any) -> Path:
    """先写临时文件再 os.replace，避免留下半个文件"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            json.dump(payload, f, ensure_ascii=False, indent=2, allow_nan=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def read_json(path: Union[str, Path], schema: Dict[str, Any] = None) -> Any:
    """读取 JSON，可选地按 schema 校验"""
    with open(path, "r", encoding="utf-8") as f:
        payload = json.load(f)
    if schema is not None:
        validate_payload(payload, schema, name=Path(path).name)
    return payload


def write_csv(path: Union[str, Path], rows: Iterable[Mapping[str, Any]], fieldnames: Sequence[str]) -> Path:
    """写出带表头的 CSV"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=list(fieldnames))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path


def read_csv(path: Union[str, Path]) -> List[Dict[str, str]]:
    with open(path, "r", encoding="utf-8", newline="") as f:
        return list(csv.DictReader(f))
