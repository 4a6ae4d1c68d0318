"""
图相关数据模型
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True, eq=False)
class Graph:
    """对称加权稀疏图

    每条无向边只存储一次 (src <= dst)，按 (src, dst) 字典序排列。
    src == dst 表示显式添加的自环。
    """
    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.weight, other.weight)
        )

    __hash__ = None

    @property
    def num_edges(self) -> int:
        """不含自环的无向边数"""
        return int(np.count_nonzero(self.src != self.dst))

    @property
    def num_self_loops(self) -> int:
        return int(np.count_nonzero(self.src == self.dst))

    @property
    def edges(self) -> List[Tuple[int, int, float]]:
        return [
            (int(i), int(j), float(w))
            for i, j, w in zip(self.src, self.dst, self.weight)
        ]

    def adjacency(self) -> sp.csr_matrix:
        """展开为对称的 CSR 邻接矩阵 A"""
        off = self.src != self.dst
        rows = np.concatenate([self.src, self.dst[off]])
        cols = np.concatenate([self.dst, self.src[off]])
        data = np.concatenate([self.weight, self.weight[off]])
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n, self.n), dtype=np.float64)

    def degrees(self) -> np.ndarray:
        """加权度 d_i = sum_j A_ij"""
        deg = np.zeros(self.n, dtype=np.float64)
        np.add.at(deg, self.src, self.weight)
        off = self.src != self.dst
        np.add.at(deg, self.dst[off], self.weight[off])
        return deg

    def neighbor_counts(self) -> np.ndarray:
        """不计自环的邻居个数"""
        counts = np.zeros(self.n, dtype=np.int64)
        off = self.src != self.dst
        np.add.at(counts, self.src[off], 1)
        np.add.at(counts, self.dst[off], 1)
        return counts


@dataclass(frozen=True, eq=False)
class NormalizedOps:
    """归一化算子集合

    a_norm: A_n = D^{-1/2} A D^{-1/2}
    lap_norm: L_n = I - A_n
    a_renorm: Ã_n = D̃^{-1/2} (A + I) D̃^{-1/2}
    d_ratio: D_r = diag(d_i / d̃_i)
    d_tilde_inv: D̃^{-1}
    """
    a_norm: sp.csr_matrix
    lap_norm: sp.csr_matrix
    a_renorm: sp.csr_matrix
    d_ratio: sp.dia_matrix
    d_tilde_inv: sp.dia_matrix
    degrees: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return self.a_norm.shape[0]


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """对称算子的特征分解，特征值升序，列向量正交归一"""
    vectors: np.ndarray
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.vectors.shape[0]

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.values) @ self.vectors.T
