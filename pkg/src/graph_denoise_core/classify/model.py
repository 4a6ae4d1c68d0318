"""
分类模型 - 卷积核传播 + 无偏置线性头，手写反向传播

两层: H = relu(K(X)·W1)，logits = K(H)·W2
一层: logits = K(X)·W2
损失: 训练节点上的平均交叉熵 + l2·(||W1||² + ||W2||²)
"""

from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

import numpy as np

from ..filters.base import BaseKernel
from ..filters.factory import KernelFactory
from ..graph.core import normalized_ops
from ..models.config import TrainConfig
from ..models.dataset import ClassifierParams, LabeledDataset


def glorot(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    """均匀分布 ±√(6/(fan_in+fan_out))"""
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=(fan_in, fan_out))


def build_kernel(ds: LabeledDataset, cfg: TrainConfig, beta: Optional[float] = None) -> BaseKernel:
    """按训练配置为数据集创建卷积核，孤立节点在 A_n 中为零行"""
    ops = normalized_ops(ds.graph, allow_isolated=True)
    denoise = cfg.denoise if beta is None else replace(cfg.denoise, beta=beta)
    options = {}
    if cfg.kernel.startswith("gsdn-ef"):
        options = {"graph": ds.graph, "features": ds.features}
    elif cfg.kernel == "cheby":
        options = {"lambda_max": cfg.cheby_lambda_max}
    return KernelFactory.create_kernel(cfg.kernel, ops, denoise, **options)


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=1, keepdims=True)


@dataclass
class ForwardCache:
    logits: np.ndarray
    pre1: Optional[np.ndarray] = None
    hidden_in: Optional[np.ndarray] = None


class KernelClassifier:
    """绑定到一个数据集的模型，第一层的传播结果 K(X) 只计算一次"""

    def __init__(self, kernel: BaseKernel, features: np.ndarray, layers: int, hidden_units: int,
                 n_classes: int, l2_weight: float):
        self.kernel = kernel
        self.layers = layers
        self.hidden_units = hidden_units
        self.n_classes = n_classes
        self.l2_weight = l2_weight
        self.propagated = kernel.propagate(features)

    @property
    def input_dim(self) -> int:
        return self.propagated.shape[1]

    def init_params(self, rng: np.random.Generator, beta: Optional[float] = None) -> ClassifierParams:
        if self.layers == 1:
            return ClassifierParams(w2=glorot(rng, self.input_dim, self.n_classes), beta=beta)
        w1 = glorot(rng, self.input_dim, self.hidden_units)
        w2 = glorot(rng, self.hidden_units * self.kernel.n_terms, self.n_classes)
        return ClassifierParams(w2=w2, w1=w1, beta=beta)

    def forward(self, params: ClassifierParams) -> ForwardCache:
        if params.w1 is None:
            return ForwardCache(logits=self.propagated @ params.w2)
        pre1 = self.propagated @ params.w1
        hidden_in = self.kernel.propagate(np.maximum(pre1, 0.0))
        return ForwardCache(logits=hidden_in @ params.w2, pre1=pre1, hidden_in=hidden_in)

    def predict(self, params: ClassifierParams) -> np.ndarray:
        return np.argmax(self.forward(params).logits, axis=1)

    def loss(self, params: ClassifierParams, labels: np.ndarray, train_idx: np.ndarray) -> float:
        return self.loss_and_grads(params, labels, train_idx, with_grads=False)[0]

    def loss_and_grads(
        self,
        params: ClassifierParams,
        labels: np.ndarray,
        train_idx: np.ndarray,
        with_grads: bool = True,
    ) -> Tuple[float, Dict[str, np.ndarray], ForwardCache]:
        """返回损失、梯度 {'w1', 'w2'} 与前向缓存"""
        cache = self.forward(params)
        logits = cache.logits[train_idx]
        shifted = logits - logits.max(axis=1, keepdims=True)
        log_norm = np.log(np.sum(np.exp(shifted), axis=1))
        target = labels[train_idx]
        ce = float(np.mean(log_norm - shifted[np.arange(target.size), target]))
        penalty = float(np.sum(params.w2 ** 2))
        if params.w1 is not None:
            penalty += float(np.sum(params.w1 ** 2))
        loss = ce + self.l2_weight * penalty
        if not with_grads:
            return loss, {}, cache

        d_logits = np.zeros_like(cache.logits)
        probs = softmax(logits)
        probs[np.arange(target.size), target] -= 1.0
        d_logits[train_idx] = probs / target.size

        grads: Dict[str, np.ndarray] = {}
        if params.w1 is None:
            grads["w2"] = self.propagated.T @ d_logits + 2.0 * self.l2_weight * params.w2
            return loss, grads, cache

        grads["w2"] = cache.hidden_in.T @ d_logits + 2.0 * self.l2_weight * params.w2
        d_hidden = self.kernel.propagate_adjoint(d_logits @ params.w2.T)
        d_pre1 = d_hidden * (cache.pre1 > 0)
        grads["w1"] = self.propagated.T @ d_pre1 + 2.0 * self.l2_weight * params.w1
        return loss, grads, cache


def build_model(ds: LabeledDataset, cfg: TrainConfig, beta: Optional[float] = None) -> KernelClassifier:
    kernel = build_kernel(ds, cfg, beta)
    return KernelClassifier(
        kernel=kernel,
        features=ds.features,
        layers=cfg.layers,
        hidden_units=cfg.hidden_units,
        n_classes=ds.num_classes,
        l2_weight=cfg.l2_weight,
    )
