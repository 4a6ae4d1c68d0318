"""
数据集模块 - 合成随机块模型与引文网络原始格式
"""

from .citation import load_citation_raw, load_truth_features, write_citation_files
from .manifest import MANIFEST_NAME, build_dataset_manifest, read_dataset_manifest, write_dataset_manifest
from .sbm import (
    MAX_ATTEMPTS,
    SbmDataset,
    community_labels,
    gen_sbm,
    planted_features,
    smoothness_permutation_test,
    write_sbm_files,
)
from .split import default_split_sizes, make_split

__all__ = [
    "MANIFEST_NAME",
    "MAX_ATTEMPTS",
    "SbmDataset",
    "build_dataset_manifest",
    "community_labels",
    "default_split_sizes",
    "gen_sbm",
    "load_citation_raw",
    "load_truth_features",
    "make_split",
    "planted_features",
    "read_dataset_manifest",
    "smoothness_permutation_test",
    "write_citation_files",
    "write_dataset_manifest",
    "write_sbm_files",
]
