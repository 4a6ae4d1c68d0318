"""
节点分类模块 - 卷积核传播 + 手写反向传播的线性头
"""

from .metrics import accuracy, micro_f1
from .model import KernelClassifier, build_kernel, build_model, glorot
from .sweep import SWEEP_PARAMS, SweepTrend, asweep, sweep, sweep_trend
from .trainer import evaluate, gradient_check, train

__all__ = [
    "KernelClassifier",
    "SWEEP_PARAMS",
    "SweepTrend",
    "accuracy",
    "asweep",
    "build_kernel",
    "build_model",
    "evaluate",
    "glorot",
    "gradient_check",
    "micro_f1",
    "sweep",
    "sweep_trend",
    "train",
]
