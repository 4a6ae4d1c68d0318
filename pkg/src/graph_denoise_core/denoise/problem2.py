"""
特征与边权联合去噪 - 交替不动点迭代

    X̂ ← (1-α)(I - αÂ_n)^{-1} X
    Â_n ← A_n + √ε₂ · X̂X̂^T / ||X̂||²_F

初始 X̂ = X，Â_n = A_n；每轮先更新 X̂ 再更新 Â_n。
"""

import math

import numpy as np
from loguru import logger

from ..exceptions import AlphaRangeError, IsolatedNodeError
from ..graph.core import as_features, normalized_ops
from ..models.graph import Graph
from ..models.report import Problem2Result
from ..spectral.oracle import DEFAULT_DENSE_CAP, check_dense_cap, resolvent_solve


def _feature_outer(x_hat: np.ndarray) -> np.ndarray:
    cols = x_hat.reshape(x_hat.shape[0], -1)
    gram = cols @ cols.T
    norm_sq = float(np.sum(cols * cols))
    if norm_sq == 0.0:
        return np.zeros_like(gram)
    return (gram + gram.T) / 2.0 / norm_sq


def _renormalize(a_hat: np.ndarray) -> np.ndarray:
    a_hat = np.maximum(a_hat, 0.0)
    deg = a_hat.sum(axis=1)
    isolated = np.flatnonzero(deg <= 0)
    if isolated.size:
        raise IsolatedNodeError(isolated[0], "problem-2 renormalization")
    inv_sqrt = 1.0 / np.sqrt(deg)
    return a_hat * np.outer(inv_sqrt, inv_sqrt)


def problem2_solve(
    g: Graph,
    x,
    alpha: float,
    eps2: float,
    iters: int = 10,
    tol: float = 1e-6,
    renormalize: bool = False,
    cap: int = DEFAULT_DENSE_CAP,
) -> Problem2Result:
    """交替求解特征去噪与边权去噪

    Args:
        g: 图
        x: 含噪特征
        alpha: 0 < α < 1，α = 1/(1+γ)
        eps2: ε₂ ≥ 0，修正项系数为 √ε₂
        iters: 最大迭代轮数
        tol: 相邻两轮 X̂ 的 Frobenius 距离小于该值即停止
        renormalize: 每轮对 Â_n 截断负值并重新做对称归一化
        cap: 稠密求解的节点数上限

    Returns:
        Problem2Result: 最后一轮的 X̂ 与 Â_n，以及是否收敛

    Raises:
        SolverError: 线性系统奇异
    """
    if not (0.0 < alpha < 1.0):
        raise AlphaRangeError(f"problem 2 requires 0 < alpha < 1, got {alpha}")
    if not (math.isfinite(eps2) and eps2 >= 0):
        raise ValueError(f"eps2 must be finite and >= 0, got {eps2}")
    if int(iters) != iters or iters < 1:
        raise ValueError(f"iters must be an integer >= 1, got {iters}")

    ops = normalized_ops(g)
    check_dense_cap(ops.n, cap)
    x = as_features(x, ops.n)
    a_n = ops.a_norm.toarray()
    weight = math.sqrt(eps2)

    a_hat = a_n
    x_prev = x
    x_hat = x
    deltas = []
    converged = False
    for it in range(1, int(iters) + 1):
        x_hat = resolvent_solve(a_hat, x, alpha)
        delta = float(np.linalg.norm(x_hat - x_prev))
        deltas.append(delta)
        if weight > 0:
            a_hat = a_n + weight * _feature_outer(x_hat)
            if renormalize:
                a_hat = _renormalize(a_hat)
        logger.debug(f"problem 2 iteration {it}: delta={delta:.3e}")
        x_prev = x_hat
        if delta < tol:
            converged = True
            break

    if not converged:
        message = f"problem 2 did not converge in {iters} iteration(s), last delta={deltas[-1]:.3e}"
        if iters > 1:
            logger.warning(message)
        else:
            logger.debug(message)

    return Problem2Result(
        features=x_hat,
        adjacency=a_hat,
        converged=converged,
        iterations=len(deltas),
        deltas=tuple(deltas),
    )
