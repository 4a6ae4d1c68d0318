"""
数据模型 - 核心数据结构定义

定义图、配置、数据集与实验报告使用的数据模型
"""

from .config import (
    ChebyCoeffs,
    DenoiseConfig,
    EdgeNoiseMode,
    FeatureNorm,
    NoiseSpec,
    Optimizer,
    SbmSpec,
    TrainConfig,
)
from .dataset import ClassifierParams, LabeledDataset
from .graph import EigenSystem, Graph, NormalizedOps
from .report import (
    BiasVarReport,
    DenoiseReport,
    EdgePerturbation,
    EpochMetrics,
    Problem2Result,
    RunManifest,
    SweepRow,
    TrainHistory,
)

__all__ = [
    "Graph",
    "NormalizedOps",
    "EigenSystem",
    "ChebyCoeffs",
    "DenoiseConfig",
    "NoiseSpec",
    "SbmSpec",
    "TrainConfig",
    "FeatureNorm",
    "EdgeNoiseMode",
    "Optimizer",
    "LabeledDataset",
    "ClassifierParams",
    "DenoiseReport",
    "EdgePerturbation",
    "Problem2Result",
    "BiasVarReport",
    "EpochMetrics",
    "TrainHistory",
    "SweepRow",
    "RunManifest",
]
