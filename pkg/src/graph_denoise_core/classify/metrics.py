"""
分类指标
"""

import numpy as np


def accuracy(y_true, y_pred) -> float:
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.size == 0:
        raise ValueError("accuracy undefined on an empty set")
    return float(np.mean(y_true == y_pred))


def micro_f1(y_true, y_pred) -> float:
    """Micro-F1

    输入为类别索引时（单标签多分类）结果等于准确率；
    输入为 0/1 指示矩阵时（多标签）按全部 (节点, 标签) 对统计 TP/FP/FN。
    """
    y_true = np.asarray(y_true)
    y_pred = np.asarray(y_pred)
    if y_true.shape != y_pred.shape:
        raise ValueError(f"shape mismatch: {y_true.shape} vs {y_pred.shape}")
    if y_true.size == 0:
        raise ValueError("micro-F1 undefined on an empty set")
    if y_true.ndim == 1:
        return accuracy(y_true, y_pred)

    t = y_true.astype(bool)
    p = y_pred.astype(bool)
    tp = int(np.sum(t & p))
    fp = int(np.sum(~t & p))
    fn = int(np.sum(t & ~p))
    denom = 2 * tp + fp + fn
    return 2.0 * tp / denom if denom else 0.0
