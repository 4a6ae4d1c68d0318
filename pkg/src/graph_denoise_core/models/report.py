"""
实验结果相关数据模型
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np


@dataclass(frozen=True, eq=False)
class DenoiseReport:
    """去噪结果报告

    per_node_noise: 卷积输出与真实特征的逐节点距离
    per_node_noise_before: 含噪输入与真实特征的逐节点距离
    """
    per_node_noise: np.ndarray
    per_node_noise_before: np.ndarray
    mean_noise: float
    mean_noise_before: float
    tv_before: float
    tv_after: float

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {"node_id": i, "noise_before": float(b), "noise_after": float(a)}
            for i, (b, a) in enumerate(zip(self.per_node_noise_before, self.per_node_noise))
        ]

    def summary(self) -> Dict[str, float]:
        return {
            "mean_noise_before": self.mean_noise_before,
            "mean_noise": self.mean_noise,
            "tv_before": self.tv_before,
            "tv_after": self.tv_after,
        }


@dataclass(frozen=True)
class EdgePerturbation:
    """边扰动记录"""
    added: Tuple[Tuple[int, int], ...]
    removed: Tuple[Tuple[int, int], ...]

    @property
    def num_operations(self) -> int:
        return len(self.added) + len(self.removed)


@dataclass(frozen=True, eq=False)
class Problem2Result:
    """特征与边权联合去噪的不动点迭代结果"""
    features: np.ndarray
    adjacency: np.ndarray
    converged: bool
    iterations: int
    deltas: Tuple[float, ...] = ()


@dataclass(frozen=True, eq=False)
class BiasVarReport:
    """偏差-方差分解报告

    variance / bias_sq 为闭式解 (alpha >= 1 时为 NaN)，
    mc_variance / mc_bias_sq / mse 为 Monte-Carlo 估计。
    """
    alpha_grid: np.ndarray
    mse: np.ndarray
    variance: np.ndarray
    bias_sq: np.ndarray
    mc_variance: np.ndarray
    mc_bias_sq: np.ndarray
    mse_se: np.ndarray
    n_samples: int
    mc_only: np.ndarray

    def rows(self) -> List[Dict[str, Any]]:
        return [
            {
                "alpha": float(a),
                "mse": float(m),
                "var_mc": float(vm),
                "var_closed": float(vc),
                "bias_sq_mc": float(bm),
                "bias_sq_closed": float(bc),
            }
            for a, m, vm, vc, bm, bc in zip(
                self.alpha_grid, self.mse, self.mc_variance, self.variance,
                self.mc_bias_sq, self.bias_sq,
            )
        ]


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    train_loss: float
    train_acc: float
    val_acc: float


@dataclass
class TrainHistory:
    """训练过程指标"""
    epochs: List[EpochMetrics] = field(default_factory=list)
    weight_norms: List[float] = field(default_factory=list)
    beta_scores: Dict[float, float] = field(default_factory=dict)

    def rows(self) -> List[Dict[str, Any]]:
        return [asdict(e) for e in self.epochs]

    @property
    def final(self) -> Optional[EpochMetrics]:
        return self.epochs[-1] if self.epochs else None


@dataclass(frozen=True)
class SweepRow:
    """参数扫描的一行结果"""
    value: float
    mean_accuracy: float
    std_accuracy: float
    accuracies: Tuple[float, ...]


@dataclass
class RunManifest:
    """CLI 运行清单，每次运行写且只写一份"""
    command: str
    argv: List[str]
    config: Dict[str, Any]
    seeds: List[int]
    version: str
    outputs: List[str]
    duration_seconds: float
    status: str = "ok"
    error: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
