"""
边权去噪 - GSDN-EF 的 Â = A_n + β·XX^T/||X||²
"""

from typing import Tuple

import numpy as np
from loguru import logger

from ..exceptions import GraphValidationError, IsolatedNodeError, OracleCapExceededError
from ..graph.core import as_features, normalized_ops
from ..models.config import DenoiseConfig
from ..models.graph import Graph, NormalizedOps

# 不带掩码时 Â 为稠密矩阵，超过该规模直接拒绝
DENSE_EDGE_CAP = 5000


def _upper_graph(n: int, rows: np.ndarray, cols: np.ndarray, weights: np.ndarray) -> Graph:
    keep = (rows <= cols) & (weights > 0)
    rows, cols, weights = rows[keep], cols[keep], weights[keep]
    order = np.lexsort((cols, rows))
    src = rows[order].astype(np.int64)
    dst = cols[order].astype(np.int64)
    weight = weights[order].astype(np.float64)
    for arr in (src, dst, weight):
        arr.flags.writeable = False
    return Graph(n=n, src=src, dst=dst, weight=weight)


def gsdnef_denoise_adjacency(
    g: Graph,
    ops: NormalizedOps,
    x,
    cfg: DenoiseConfig,
    dense_cap: int = DENSE_EDGE_CAP,
) -> Tuple[Graph, NormalizedOps]:
    """构造去噪邻接矩阵 Â 并返回其归一化算子 Â_n

    ||X|| 取 Frobenius 范数。负的 Â 元素截断为0。原图中已孤立的节点在 Â_n 中保持零行。
    sparse_edge_mask 为 True 时修正项只加在 A 原有的非对角元素上；
    否则构造稠密 Â，修正项对角线是否置零由 zero_diagonal 决定。

    Args:
        g: 原图
        ops: 原图的归一化算子
        x: N×F 特征矩阵
        cfg: 含 beta / sparse_edge_mask / zero_diagonal

    Returns:
        (Â 对应的图, Â_n 的归一化算子)

    Raises:
        IsolatedNodeError: 原图中有边的节点在截断后变为孤立节点
        OracleCapExceededError: 稠密路径规模超过上限
    """
    n = ops.n
    x2 = as_features(x, n).reshape(n, -1)
    beta = float(cfg.beta)
    norm_sq = float(np.sum(x2 * x2))
    if beta != 0.0 and not (np.isfinite(norm_sq) and norm_sq > 0):
        raise GraphValidationError(f"feature norm must be finite and nonzero, got {norm_sq}")

    a_norm = ops.a_norm.tocoo()
    if cfg.sparse_edge_mask or beta == 0.0:
        rows, cols = a_norm.row, a_norm.col
        data = a_norm.data.copy()
        if beta != 0.0:
            off = rows != cols
            corr = np.sum(x2[rows[off]] * x2[cols[off]], axis=1)
            data[off] += beta * corr / norm_sq
    else:
        if n > dense_cap:
            raise OracleCapExceededError(
                f"dense edge denoising limited to {dense_cap} nodes, got {n}; use the sparse mask"
            )
        gram = x2 @ x2.T
        corr = beta * ((gram + gram.T) / 2.0) / norm_sq
        if cfg.zero_diagonal:
            np.fill_diagonal(corr, 0.0)
        dense = ops.a_norm.toarray() + corr
        rows, cols = np.nonzero(np.triu(dense) != 0)
        data = dense[rows, cols]

    clamped = int(np.count_nonzero(data < 0))
    if clamped:
        logger.debug(f"clamped {clamped} negative entries of the denoised adjacency")
    data = np.maximum(data, 0.0)

    denoised = _upper_graph(n, rows, cols, data)
    original = g.degrees()
    isolated = np.flatnonzero((denoised.degrees() <= 0) & (original > 0))
    if isolated.size:
        raise IsolatedNodeError(isolated[0], "edge denoising")

    logger.debug(
        f"edge denoising beta={beta}, mask={cfg.sparse_edge_mask}: "
        f"{denoised.num_edges} edges, {denoised.num_self_loops} self-loops"
    )
    return denoised, normalized_ops(denoised, allow_isolated=bool(np.any(original <= 0)))
