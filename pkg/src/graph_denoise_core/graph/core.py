"""
图核心运算 - 图构建、归一化算子、总变差与稀疏乘法
"""

from typing import Iterable, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from loguru import logger

from ..exceptions import DimensionMismatchError, GraphValidationError, IsolatedNodeError
from ..models.graph import Graph, NormalizedOps

EdgeTuple = Union[Tuple[int, int], Tuple[int, int, float]]

# 总变差的舍入容差
TV_TOLERANCE = 1e-12


def as_features(x, n: Optional[int] = None, name: str = "x") -> np.ndarray:
    """将输入转为 float64 特征矩阵并检查维度与有限性

    Args:
        x: 一维信号或 N×F 矩阵
        n: 期望的行数（节点数）
        name: 报错时使用的名称

    Returns:
        float64 数组，维数与输入相同
    """
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim not in (1, 2):
        raise DimensionMismatchError(f"{name} must be 1-D or 2-D, got {arr.ndim}-D")
    if n is not None and arr.shape[0] != n:
        raise DimensionMismatchError(f"{name} has {arr.shape[0]} rows, expected {n}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


def build_graph(
    n: int,
    edge_list: Sequence[EdgeTuple],
    allow_self_loops: bool = False,
) -> Graph:
    """根据边列表构建对称图

    (i, j) 与 (j, i) 视为同一条无向边，重复出现时权重求和。

    Args:
        n: 节点数
        edge_list: (i, j) 或 (i, j, weight) 列表，索引从0开始
        allow_self_loops: 是否允许 i == j

    Returns:
        Graph: 规范化存储的图

    Raises:
        GraphValidationError: 索引越界、权重非有限或非正、出现未声明的自环
    """
    if int(n) != n or n < 0:
        raise GraphValidationError(f"node count must be a non-negative integer, got {n}")
    n = int(n)

    edges = list(edge_list)
    if not edges:
        empty_i = np.zeros(0, dtype=np.int64)
        return Graph(n, _readonly(empty_i.copy()), _readonly(empty_i.copy()),
                     _readonly(np.zeros(0, dtype=np.float64)))

    if all(len(e) == 3 for e in edges):
        arr = np.asarray(edges, dtype=np.float64)
        weights = arr[:, 2]
    elif all(len(e) == 2 for e in edges):
        arr = np.asarray(edges, dtype=np.float64)
        weights = np.ones(arr.shape[0], dtype=np.float64)
    else:
        raise GraphValidationError("edges must all be (i, j) or all be (i, j, weight)")

    i_raw, j_raw = arr[:, 0], arr[:, 1]
    bad = (
        (i_raw != np.floor(i_raw)) | (j_raw != np.floor(j_raw))
        | (i_raw < 0) | (j_raw < 0) | (i_raw >= n) | (j_raw >= n)
    )
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise GraphValidationError(
            f"edge {k}: index ({edges[k][0]}, {edges[k][1]}) out of range for n={n}"
        )
    bad_w = ~np.isfinite(weights) | (weights <= 0)
    if np.any(bad_w):
        k = int(np.flatnonzero(bad_w)[0])
        raise GraphValidationError(f"edge {k}: weight {weights[k]} must be finite and > 0")

    i_idx = i_raw.astype(np.int64)
    j_idx = j_raw.astype(np.int64)
    loops = i_idx == j_idx
    if np.any(loops) and not allow_self_loops:
        k = int(np.flatnonzero(loops)[0])
        raise GraphValidationError(f"edge {k}: self-loop on node {i_idx[k]} not allowed")

    lo = np.minimum(i_idx, j_idx)
    hi = np.maximum(i_idx, j_idx)
    keys = lo * n + hi
    uniq, inverse = np.unique(keys, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=weights, minlength=uniq.size)

    return Graph(
        n=n,
        src=_readonly(uniq // n),
        dst=_readonly(uniq % n),
        weight=_readonly(merged.astype(np.float64)),
    )


def _scale_symmetric(matrix: sp.spmatrix, scale: np.ndarray) -> sp.csr_matrix:
    """计算 diag(s) M diag(s)，逐元素 M_ij * (s_i * s_j) 保证结果严格对称"""
    coo = matrix.tocoo()
    data = coo.data * (scale[coo.row] * scale[coo.col])
    return sp.csr_matrix((data, (coo.row, coo.col)), shape=matrix.shape, dtype=np.float64)


def normalize_adjacency(adjacency: sp.spmatrix, allow_isolated: bool = False) -> sp.csr_matrix:
    """对称归一化 D^{-1/2} M D^{-1/2}"""
    deg = np.asarray(adjacency.sum(axis=1)).ravel()
    isolated = np.flatnonzero(deg <= 0)
    if isolated.size and not allow_isolated:
        raise IsolatedNodeError(isolated[0], "plain normalization")
    inv_sqrt = np.zeros_like(deg)
    pos = deg > 0
    inv_sqrt[pos] = 1.0 / np.sqrt(deg[pos])
    return _scale_symmetric(adjacency, inv_sqrt)


def normalized_ops(g: Graph, allow_isolated: bool = False) -> NormalizedOps:
    """构建归一化邻接矩阵、拉普拉斯矩阵及重归一化算子

    Args:
        g: 图
        allow_isolated: 为 True 时孤立节点在 A_n 中对应零行（仅记录警告）

    Returns:
        NormalizedOps

    Raises:
        IsolatedNodeError: 存在孤立节点且 allow_isolated 为 False
    """
    n = g.n
    adjacency = g.adjacency()
    deg = g.degrees()

    isolated = np.flatnonzero(deg <= 0)
    if isolated.size:
        if not allow_isolated:
            raise IsolatedNodeError(isolated[0], "plain normalization")
        logger.warning(f"{isolated.size} isolated node(s) get zero rows in A_n (first: {isolated[0]})")

    a_norm = normalize_adjacency(adjacency, allow_isolated=True)
    identity = sp.identity(n, format="csr", dtype=np.float64)
    lap_norm = (identity - a_norm).tocsr()

    deg_tilde = deg + 1.0
    a_renorm = _scale_symmetric((adjacency + identity).tocsr(), 1.0 / np.sqrt(deg_tilde))

    return NormalizedOps(
        a_norm=a_norm,
        lap_norm=lap_norm,
        a_renorm=a_renorm,
        d_ratio=sp.diags(deg / deg_tilde),
        d_tilde_inv=sp.diags(1.0 / deg_tilde),
        degrees=_readonly(deg.copy()),
    )


def spmm(op, x) -> np.ndarray:
    """稀疏算子与稠密特征矩阵相乘

    Raises:
        DimensionMismatchError: 维度不匹配
    """
    x = np.asarray(x, dtype=np.float64)
    if op.shape[1] != x.shape[0]:
        raise DimensionMismatchError(
            f"operator is {op.shape[0]}x{op.shape[1]} but input has {x.shape[0]} rows"
        )
    return np.asarray(op @ x)


def total_variation(ops: NormalizedOps, x) -> float:
    """总变差 Tr(X^T L_n X)

    负的舍入误差截断为0；低于 -1e-12 时额外记录警告。
    """
    x = as_features(x, ops.n)
    x2 = x.reshape(ops.n, -1)
    tv = float(np.sum(x2 * spmm(ops.lap_norm, x2)))
    if tv < 0:
        if tv < -TV_TOLERANCE:
            logger.warning(f"total variation {tv:.3e} below rounding tolerance, clamped to 0")
        tv = 0.0
    return tv


def smooth_eigenvector(ops: NormalizedOps) -> np.ndarray:
    """A_n 特征值为1的单位特征向量 D^{1/2}1 / ||D^{1/2}1||"""
    v = np.sqrt(ops.degrees)
    return v / np.linalg.norm(v)


def path_graph(n: int) -> Graph:
    """路径图 P_n"""
    return build_graph(n, [(i, i + 1, 1.0) for i in range(n - 1)])


def edge_pairs(g: Graph) -> Iterable[Tuple[int, int]]:
    """不含自环的 (i, j) 边对，i < j"""
    off = g.src != g.dst
    return zip(g.src[off].tolist(), g.dst[off].tolist())
