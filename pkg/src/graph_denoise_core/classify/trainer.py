"""
训练与评估 - 全批量训练、β 验证集选择、梯度检查
"""

import math
from typing import Dict, Optional, Tuple

import numpy as np
from loguru import logger

from ..exceptions import SplitError, TrainingDivergedError
from ..models.config import Optimizer, TrainConfig
from ..models.dataset import SPLITS, ClassifierParams, LabeledDataset
from ..models.report import EpochMetrics, TrainHistory
from .metrics import accuracy, micro_f1
from .model import KernelClassifier, build_model

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8


class _Adam:
    def __init__(self, lr: float):
        self.lr = lr
        self.t = 0
        self.m: Dict[str, np.ndarray] = {}
        self.v: Dict[str, np.ndarray] = {}

    def step(self, name: str, weight: np.ndarray, grad: np.ndarray) -> np.ndarray:
        if name not in self.m:
            self.m[name] = np.zeros_like(weight)
            self.v[name] = np.zeros_like(weight)
        self.m[name] = ADAM_BETA1 * self.m[name] + (1 - ADAM_BETA1) * grad
        self.v[name] = ADAM_BETA2 * self.v[name] + (1 - ADAM_BETA2) * grad * grad
        m_hat = self.m[name] / (1 - ADAM_BETA1 ** self.t)
        v_hat = self.v[name] / (1 - ADAM_BETA2 ** self.t)
        return weight - self.lr * m_hat / (np.sqrt(v_hat) + ADAM_EPS)


def _update(params: ClassifierParams, grads: Dict[str, np.ndarray], cfg: TrainConfig,
            adam: Optional[_Adam]) -> ClassifierParams:
    def step(name: str, weight: np.ndarray) -> np.ndarray:
        if adam is None:
            return weight - cfg.learning_rate * grads[name]
        return adam.step(name, weight, grads[name])

    if adam is not None:
        adam.t += 1
    w2 = step("w2", params.w2)
    w1 = None if params.w1 is None else step("w1", params.w1)
    return ClassifierParams(w2=w2, w1=w1, beta=params.beta)


def _weight_norm(params: ClassifierParams) -> float:
    total = float(np.sum(params.w2 ** 2))
    if params.w1 is not None:
        total += float(np.sum(params.w1 ** 2))
    return math.sqrt(total)


def _check_dataset(ds: LabeledDataset) -> None:
    if not ds.has_split:
        raise SplitError("dataset has no train split; call make_split first")
    present = np.unique(ds.labels[ds.train_idx])
    missing = sorted(set(range(ds.num_classes)) - set(present.tolist()))
    if missing:
        raise SplitError(f"class(es) {missing} have no training node")


def _fit(
    ds: LabeledDataset, cfg: TrainConfig, beta: Optional[float]
) -> Tuple[ClassifierParams, TrainHistory, KernelClassifier]:
    rng = np.random.default_rng(cfg.seed)
    model = build_model(ds, cfg, beta)
    params = model.init_params(rng, beta)
    adam = _Adam(cfg.learning_rate) if cfg.optimizer is Optimizer.ADAM else None
    history = TrainHistory()

    for epoch in range(1, cfg.epochs + 1):
        loss, grads, cache = model.loss_and_grads(params, ds.labels, ds.train_idx)
        if not math.isfinite(loss):
            raise TrainingDivergedError(epoch, loss)
        pred = np.argmax(cache.logits, axis=1)
        train_acc = accuracy(ds.labels[ds.train_idx], pred[ds.train_idx])
        val_acc = accuracy(ds.labels[ds.val_idx], pred[ds.val_idx]) if ds.val_idx.size else float("nan")
        history.epochs.append(EpochMetrics(epoch, loss, train_acc, val_acc))
        params = _update(params, grads, cfg, adam)
        history.weight_norms.append(_weight_norm(params))
        if epoch % 50 == 0:
            logger.debug(f"epoch {epoch}: loss={loss:.4f}, train_acc={train_acc:.3f}, val_acc={val_acc:.3f}")

    return params, history, model


def train(ds: LabeledDataset, cfg: TrainConfig) -> Tuple[ClassifierParams, TrainHistory]:
    """训练分类模型

    gsdn-ef 系列核在 beta_grid 上逐个训练，按验证集准确率选择 β（并列时取靠前者）。

    Args:
        ds: 已划分的数据集
        cfg: 训练配置

    Returns:
        (ClassifierParams, TrainHistory)

    Raises:
        SplitError: 没有划分，或某类别没有训练节点
        TrainingDivergedError: 损失变为 NaN/Inf
    """
    _check_dataset(ds)
    if not cfg.kernel.startswith("gsdn-ef"):
        params, history, _ = _fit(ds, cfg, None)
        logger.info(f"trained {cfg.kernel} ({cfg.layers} layer(s), {cfg.epochs} epochs, seed={cfg.seed})")
        return params, history

    if ds.val_idx.size == 0:
        raise SplitError("selecting beta requires a non-empty validation split")
    best = None
    scores: Dict[float, float] = {}
    for beta in cfg.beta_grid:
        params, history, model = _fit(ds, cfg, beta)
        pred = model.predict(params)
        score = accuracy(ds.labels[ds.val_idx], pred[ds.val_idx])
        scores[beta] = score
        logger.debug(f"beta={beta}: val_acc={score:.4f}")
        if best is None or score > best[0]:
            best = (score, params, history)
    _, params, history = best
    history.beta_scores = scores
    logger.info(f"trained {cfg.kernel}: selected beta={params.beta} (val_acc={best[0]:.4f})")
    return params, history


def evaluate(
    ds: LabeledDataset,
    params: ClassifierParams,
    cfg: TrainConfig,
    mask: str = "test",
    model: Optional[KernelClassifier] = None,
) -> Tuple[float, float]:
    """在某个划分上计算 (accuracy, micro_f1)

    单标签多分类时 micro-F1 与准确率相等。
    """
    if mask not in SPLITS:
        raise ValueError(f"unknown split {mask!r}, expected one of {SPLITS}")
    idx = ds.split(mask)
    if idx.size == 0:
        raise SplitError(f"split {mask!r} is empty")
    if model is None:
        model = build_model(ds, cfg, params.beta)
    pred = model.predict(params)
    truth = ds.labels[idx]
    return accuracy(truth, pred[idx]), micro_f1(truth, pred[idx])


def gradient_check(
    ds: LabeledDataset,
    cfg: TrainConfig,
    params: ClassifierParams,
    n_samples: int = 10,
    seed: int = 0,
    kink_margin: float = 1e-3,
) -> float:
    """中心差分检查解析梯度，返回随机抽取的 n_samples 个权重元素上的最大相对误差

    步长 1e-5·max(1, |w|)。两层模型中会跳过可能跨过 relu 拐点的 W1 元素
    （某个受影响节点的 |预激活| <= kink_margin）。
    """
    if n_samples < 10:
        raise ValueError(f"n_samples must be >= 10, got {n_samples}")
    _check_dataset(ds)
    model = build_model(ds, cfg, params.beta)
    _, grads, cache = model.loss_and_grads(params, ds.labels, ds.train_idx)
    rng = np.random.default_rng(seed)
    names = ["w2"] if params.w1 is None else ["w1", "w2"]

    def loss_with(name: str, index: Tuple[int, int], value: float) -> float:
        weights = {"w1": params.w1, "w2": params.w2}
        changed = weights[name].copy()
        changed[index] = value
        weights[name] = changed
        shifted = ClassifierParams(w2=weights["w2"], w1=weights["w1"], beta=params.beta)
        return model.loss(shifted, ds.labels, ds.train_idx)

    errors = []
    attempts = 0
    while len(errors) < n_samples and attempts < 100 * n_samples:
        attempts += 1
        name = names[int(rng.integers(len(names)))]
        weight = params.w1 if name == "w1" else params.w2
        index = (int(rng.integers(weight.shape[0])), int(rng.integers(weight.shape[1])))
        if name == "w1":
            touched = model.propagated[:, index[0]] != 0
            if np.any(np.abs(cache.pre1[touched, index[1]]) <= kink_margin):
                continue
        w = float(weight[index])
        step = 1e-5 * max(1.0, abs(w))
        numeric = (loss_with(name, index, w + step) - loss_with(name, index, w - step)) / (2 * step)
        analytic = float(grads[name][index])
        errors.append(abs(numeric - analytic) / max(abs(numeric), abs(analytic), 1e-4))

    if not errors:
        raise ValueError("no sampled entry avoided the relu kinks")
    if len(errors) < n_samples:
        logger.warning(f"gradient check used {len(errors)} of {n_samples} samples (kink avoidance)")
    return max(errors)
