"""
注意力诊断 - 比较免训练注意力系数与联合去噪得到的边权

注意力系数: a_ij = softmax_{j ∈ N_i ∪ {i}} cos(X_i, X_j)，每条无向边取 (a_ij + a_ji)/2。
去噪边权: 一轮联合去噪后 Â_n 在原有边上的取值。
返回两组边值的 Spearman 秩相关系数。
"""

from typing import NamedTuple, Optional

import numpy as np
from loguru import logger
from scipy.stats import spearmanr

from ..exceptions import GraphValidationError, UndefinedCorrelationError
from ..graph.core import as_features
from ..models.graph import Graph
from .problem2 import problem2_solve

MIN_EDGES = 10


class EdgeAttention(NamedTuple):
    src: np.ndarray
    dst: np.ndarray
    attention: np.ndarray


def attention_coefficients(g: Graph, x) -> EdgeAttention:
    """计算无向边上的对称化注意力系数，零范数特征行所在的边被排除"""
    x2 = as_features(x, g.n).reshape(g.n, -1)
    norms = np.sqrt(np.sum(x2 * x2, axis=1))
    zero = norms == 0
    if np.any(zero):
        logger.warning(f"{int(zero.sum())} zero-norm feature row(s) excluded from attention")

    off = g.src != g.dst
    src, dst = g.src[off], g.dst[off]
    keep = ~zero[src] & ~zero[dst]
    src, dst = src[keep], dst[keep]

    safe = np.where(zero, 1.0, norms)
    cos = np.sum(x2[src] * x2[dst], axis=1) / (safe[src] * safe[dst])
    e = np.exp(cos)
    # 分母包含节点自身，cos(X_i, X_i) = 1
    denom = np.full(g.n, np.e)
    np.add.at(denom, src, e)
    np.add.at(denom, dst, e)
    a_ij = e / denom[src]
    a_ji = e / denom[dst]
    attention = (a_ij + a_ji) / 2.0
    return EdgeAttention(src=src, dst=dst, attention=attention)


def _check_spread(values: np.ndarray, name: str) -> None:
    scale = max(1.0, float(np.max(np.abs(values))))
    if float(np.ptp(values)) <= 1e-12 * scale:
        raise UndefinedCorrelationError(f"{name} values are constant, rank correlation undefined")


def prop2_attention_correlation(
    g: Graph,
    x,
    alpha: float,
    eps2: float,
    permute_seed: Optional[int] = None,
) -> float:
    """注意力系数与去噪边权的 Spearman 相关系数

    给定 permute_seed 时先随机打乱去噪边权与边的对应关系，得到零假设下的相关系数。

    Raises:
        GraphValidationError: 有效边少于 10 条
        UndefinedCorrelationError: 任一组边值为常数
    """
    edges = attention_coefficients(g, x)
    if edges.src.size < MIN_EDGES:
        raise GraphValidationError(
            f"attention correlation needs >= {MIN_EDGES} edges, got {edges.src.size}"
        )

    result = problem2_solve(g, x, alpha, eps2, iters=1)
    denoised = result.adjacency[edges.src, edges.dst]
    if permute_seed is not None:
        denoised = np.random.default_rng(permute_seed).permutation(denoised)

    _check_spread(edges.attention, "attention")
    _check_spread(denoised, "denoised weight")
    rho = float(spearmanr(edges.attention, denoised).statistic)
    if not np.isfinite(rho):
        raise UndefinedCorrelationError("rank correlation is not finite")
    logger.debug(f"attention/denoised-weight correlation over {edges.src.size} edges: {rho:.4f}")
    return rho
