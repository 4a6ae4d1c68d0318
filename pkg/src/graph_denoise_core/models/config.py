"""
参数配置相关数据模型
"""

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Optional, Tuple

import numpy as np


class FeatureNorm(Enum):
    """节点特征行归一化方式"""
    L1 = "l1"
    L2 = "l2"
    NONE = "none"


class EdgeNoiseMode(Enum):
    """边噪声模式"""
    ADD_AND_REMOVE = "add-and-remove"


class Optimizer(Enum):
    """全批量优化器"""
    ADAM = "adam"
    GD = "gd"


@dataclass(frozen=True)
class ChebyCoeffs:
    """Chebyshev 多项式系数 θ_0..θ_K 与谱上界 λ_max"""
    theta: Tuple[float, ...]
    lambda_max: float = 2.0

    def __post_init__(self):
        theta = tuple(float(t) for t in self.theta)
        if not theta:
            raise ValueError("ChebyCoeffs.theta must hold at least one coefficient")
        if not all(math.isfinite(t) for t in theta):
            raise ValueError("ChebyCoeffs.theta must be finite")
        if not (math.isfinite(self.lambda_max) and self.lambda_max > 0):
            raise ValueError(f"lambda_max must be positive, got {self.lambda_max}")
        object.__setattr__(self, "theta", theta)

    @property
    def k_order(self) -> int:
        return len(self.theta) - 1


@dataclass(frozen=True)
class DenoiseConfig:
    """GSDN 系列卷积核参数

    alpha: 平滑与去噪之间的平衡, 允许 alpha > 1
    k_order: 多项式阶数 K
    beta: 边去噪强度
    sparse_edge_mask: 只修正原有边 (GSDN-EF(Sparse))
    zero_diagonal: 修正项 XX^T 的对角线置零
    """
    alpha: float = 0.6
    k_order: int = 4
    beta: float = 0.0
    sparse_edge_mask: bool = False
    zero_diagonal: bool = True

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise ValueError(f"alpha must be finite and > 0, got {self.alpha}")
        if int(self.k_order) != self.k_order or self.k_order < 0:
            raise ValueError(f"k_order must be a non-negative integer, got {self.k_order}")
        if not math.isfinite(self.beta):
            raise ValueError(f"beta must be finite, got {self.beta}")
        object.__setattr__(self, "k_order", int(self.k_order))


@dataclass(frozen=True)
class NoiseSpec:
    """特征高斯噪声与边扰动参数，seed 决定全部随机性"""
    mu: float = 0.0
    sigma: float = 0.0
    edge_ratio: float = 0.0
    seed: int = 0
    edge_mode: EdgeNoiseMode = EdgeNoiseMode.ADD_AND_REMOVE

    def __post_init__(self):
        if not (math.isfinite(self.sigma) and self.sigma >= 0):
            raise ValueError(f"sigma must be >= 0, got {self.sigma}")
        if not (math.isfinite(self.edge_ratio) and self.edge_ratio >= 0):
            raise ValueError(f"edge_ratio must be >= 0, got {self.edge_ratio}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")

    def feature_rng(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, 0])

    def edge_rng(self) -> np.random.Generator:
        return np.random.default_rng([self.seed, 1])


@dataclass(frozen=True)
class SbmSpec:
    """随机块模型参数

    每个社区占用 topic_size 个互不重叠的特征维度（"主题词"），真实特征是主题的指示向量，
    按 feature_norm 行归一化后乘以 community_mean_scale。
    require_connected 为 False 时只拒绝孤立节点，允许多个连通分量。
    """
    n_nodes: int = 200
    n_communities: int = 2
    p_in: float = 0.1
    p_out: float = 0.01
    feature_dim: int = 1000
    topic_size: int = 40
    feature_norm: FeatureNorm = FeatureNorm.L1
    community_mean_scale: float = 1.0
    feature_noise_sigma: float = 0.0
    require_connected: bool = False
    seed: int = 0

    def __post_init__(self):
        if self.n_communities < 2:
            raise ValueError("n_communities must be >= 2")
        if self.n_nodes < self.n_communities:
            raise ValueError("n_nodes must be >= n_communities")
        if not (0 <= self.p_out < self.p_in <= 1):
            raise ValueError(f"need 0 <= p_out < p_in <= 1, got p_in={self.p_in}, p_out={self.p_out}")
        if self.topic_size < 1:
            raise ValueError(f"topic_size must be >= 1, got {self.topic_size}")
        if self.feature_dim < self.n_communities * self.topic_size:
            raise ValueError(
                f"feature_dim must be >= n_communities * topic_size = {self.n_communities * self.topic_size}, "
                f"got {self.feature_dim}"
            )
        if self.feature_noise_sigma < 0:
            raise ValueError("feature_noise_sigma must be >= 0")
        if isinstance(self.feature_norm, str):
            object.__setattr__(self, "feature_norm", FeatureNorm(self.feature_norm))
        object.__setattr__(self, "require_connected", bool(self.require_connected))

    def to_dict(self) -> dict:
        return {**asdict(self), "feature_norm": self.feature_norm.value}


@dataclass(frozen=True)
class TrainConfig:
    """节点分类训练参数（默认值取自论文的参数设置）"""
    learning_rate: float = 0.02
    l2_weight: float = 5e-4
    hidden_units: int = 16
    layers: int = 2
    epochs: int = 200
    kernel: str = "gsdn-f"
    denoise: DenoiseConfig = field(default_factory=DenoiseConfig)
    seed: int = 0
    beta_grid: Tuple[float, ...] = (0.0, 0.05, 0.1, 0.2, 0.5, 1.0)
    optimizer: Optimizer = Optimizer.GD
    cheby_lambda_max: Optional[float] = 2.0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.epochs < 1:
            raise ValueError(f"epochs must be >= 1, got {self.epochs}")
        if self.layers not in (1, 2):
            raise ValueError(f"layers must be 1 or 2, got {self.layers}")
        if self.hidden_units < 1:
            raise ValueError("hidden_units must be >= 1")
        if self.l2_weight < 0:
            raise ValueError("l2_weight must be >= 0")
        object.__setattr__(self, "beta_grid", tuple(float(b) for b in self.beta_grid))
        if isinstance(self.optimizer, str):
            object.__setattr__(self, "optimizer", Optimizer(self.optimizer))
