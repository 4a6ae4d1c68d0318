"""
数据集与分类器参数模型
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from .graph import Graph

SPLITS = ("train", "val", "test")


@dataclass(frozen=True, eq=False)
class LabeledDataset:
    """带标签的图数据集，划分以节点索引数组存储"""
    graph: Graph
    features: np.ndarray
    labels: np.ndarray
    train_idx: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    val_idx: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    test_idx: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    metadata: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.features.shape[0] != self.graph.n:
            raise ValueError(
                f"features have {self.features.shape[0]} rows but graph has {self.graph.n} nodes"
            )
        if self.labels.shape[0] != self.graph.n:
            raise ValueError("labels must have one entry per node")

    @property
    def num_nodes(self) -> int:
        return self.graph.n

    @property
    def num_classes(self) -> int:
        return int(self.labels.max()) + 1 if self.labels.size else 0

    @property
    def num_features(self) -> int:
        return self.features.shape[1]

    @property
    def has_split(self) -> bool:
        return self.train_idx.size > 0

    def split(self, name: str) -> np.ndarray:
        """返回某个划分的节点索引"""
        if name not in SPLITS:
            raise ValueError(f"unknown split {name!r}, expected one of {SPLITS}")
        return getattr(self, f"{name}_idx")


@dataclass(frozen=True, eq=False)
class ClassifierParams:
    """分类头权重，不含偏置

    w1: 第一层权重 (两层模型)
    w2: 输出层权重
    beta: GSDN-EF 选中的 β
    """
    w2: np.ndarray
    w1: Optional[np.ndarray] = None
    beta: Optional[float] = None

    @property
    def layers(self) -> int:
        return 1 if self.w1 is None else 2
