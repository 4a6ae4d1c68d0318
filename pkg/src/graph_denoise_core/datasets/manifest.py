"""
数据集清单 - 文件路径、校验和与规模
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Union

from ..models.dataset import LabeledDataset
from ..utils.file_utils import (
    DATASET_MANIFEST_SCHEMA,
    atomic_write_json,
    calculate_file_hash,
    read_json,
    validate_payload,
)

MANIFEST_NAME = "manifest.json"


def build_dataset_manifest(name: str, files: Mapping[str, Union[str, Path]], ds: LabeledDataset) -> Dict[str, Any]:
    metadata = {k: v for k, v in ds.metadata.items() if k not in ("node_ids", "label_names")}
    payload = {
        "name": name,
        "files": {
            kind: {"path": Path(p).name, "sha256": calculate_file_hash(p)} for kind, p in files.items()
        },
        "num_nodes": ds.num_nodes,
        "num_edges": ds.graph.num_edges,
        "num_classes": ds.num_classes,
        "num_features": ds.num_features,
        "metadata": metadata,
    }
    validate_payload(payload, DATASET_MANIFEST_SCHEMA, name="dataset manifest")
    return payload


def write_dataset_manifest(
    out_dir: Union[str, Path],
    name: str,
    files: Mapping[str, Union[str, Path]],
    ds: LabeledDataset,
) -> Path:
    """在数据文件旁写出 manifest.json"""
    payload = build_dataset_manifest(name, files, ds)
    return atomic_write_json(Path(out_dir) / MANIFEST_NAME, payload)


def read_dataset_manifest(directory: Union[str, Path]) -> Dict[str, Any]:
    return read_json(Path(directory) / MANIFEST_NAME, schema=DATASET_MANIFEST_SCHEMA)
