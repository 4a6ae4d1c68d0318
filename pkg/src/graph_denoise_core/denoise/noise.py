"""
噪声注入 - 特征归一化、高斯特征噪声与随机增删边
"""

import math
from typing import Dict, List, NamedTuple, Tuple, Union

import numpy as np
from loguru import logger

from ..exceptions import EdgeNoiseError
from ..graph.core import as_features, build_graph
from ..models.config import FeatureNorm, NoiseSpec
from ..models.graph import Graph
from ..models.report import EdgePerturbation

# 随机抽样失败这么多次后改为确定性扫描
_MAX_REJECTIONS = 1000


class NormalizedFeatures(NamedTuple):
    features: np.ndarray
    zero_rows: np.ndarray


def normalize_features(x, mode: Union[FeatureNorm, str] = FeatureNorm.L1) -> NormalizedFeatures:
    """按行归一化节点特征

    全零行原样保留，其索引记录在 zero_rows 中。

    Args:
        x: N×F 特征矩阵
        mode: l1（默认）、l2 或 none

    Returns:
        NormalizedFeatures(features, zero_rows)
    """
    mode = FeatureNorm(mode)
    x = as_features(x)
    x2 = x.reshape(x.shape[0], -1)
    if mode is FeatureNorm.L1:
        norms = np.sum(np.abs(x2), axis=1)
    elif mode is FeatureNorm.L2:
        norms = np.sqrt(np.sum(x2 * x2, axis=1))
    else:
        return NormalizedFeatures(x.copy(), np.zeros(0, dtype=np.int64))

    zero_rows = np.flatnonzero(norms == 0)
    if zero_rows.size:
        logger.warning(f"{zero_rows.size} all-zero feature row(s) left unnormalized (first: {zero_rows[0]})")
    scale = np.ones_like(norms)
    scale[norms > 0] = norms[norms > 0]
    out = (x2 / scale[:, None]).reshape(x.shape)
    return NormalizedFeatures(out, zero_rows)


def inject_feature_noise(x, spec: NoiseSpec) -> np.ndarray:
    """加入 i.i.d. 高斯噪声 N(μ, σ²)，σ = 0 且 μ = 0 时原样返回"""
    x = as_features(x)
    if spec.sigma == 0.0:
        return x.copy() if spec.mu == 0.0 else x + spec.mu
    rng = spec.feature_rng()
    return x + rng.normal(spec.mu, spec.sigma, size=x.shape)


class _EdgeSet:
    """可 O(1) 均匀抽样与删除的无向边集合"""

    def __init__(self, g: Graph):
        off = g.src != g.dst
        self.pairs: List[Tuple[int, int]] = list(zip(g.src[off].tolist(), g.dst[off].tolist()))
        self.weights: Dict[Tuple[int, int], float] = dict(zip(self.pairs, g.weight[off].tolist()))
        self.index = {p: k for k, p in enumerate(self.pairs)}
        self.neighbors = g.neighbor_counts().copy()

    def __contains__(self, pair) -> bool:
        return pair in self.index

    def __len__(self) -> int:
        return len(self.pairs)

    def add(self, pair: Tuple[int, int], weight: float = 1.0) -> None:
        self.index[pair] = len(self.pairs)
        self.pairs.append(pair)
        self.weights[pair] = weight
        self.neighbors[pair[0]] += 1
        self.neighbors[pair[1]] += 1

    def remove(self, pair: Tuple[int, int]) -> None:
        k = self.index.pop(pair)
        last = self.pairs.pop()
        if last != pair:
            self.pairs[k] = last
            self.index[last] = k
        del self.weights[pair]
        self.neighbors[pair[0]] -= 1
        self.neighbors[pair[1]] -= 1

    def removable(self, pair: Tuple[int, int]) -> bool:
        return self.neighbors[pair[0]] > 1 and self.neighbors[pair[1]] > 1


def _pick_removal(edges: _EdgeSet, rng: np.random.Generator) -> Tuple[int, int]:
    if not edges.pairs:
        raise EdgeNoiseError("no edge left to remove")
    for _ in range(_MAX_REJECTIONS):
        pair = edges.pairs[int(rng.integers(len(edges)))]
        if edges.removable(pair):
            return pair
    for k in rng.permutation(len(edges)):
        pair = edges.pairs[int(k)]
        if edges.removable(pair):
            return pair
    raise EdgeNoiseError("every remaining edge is the last edge of one of its endpoints")


def _pick_addition(edges: _EdgeSet, n: int, rng: np.random.Generator) -> Tuple[int, int]:
    if len(edges) >= n * (n - 1) // 2:
        raise EdgeNoiseError(f"graph on {n} nodes is complete, no absent pair to add")
    for _ in range(_MAX_REJECTIONS):
        i, j = (int(v) for v in rng.integers(n, size=2))
        if i == j:
            continue
        pair = (min(i, j), max(i, j))
        if pair not in edges:
            return pair
    absent = [(i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in edges]
    return absent[int(rng.integers(len(absent)))]


def perturb_edges(g: Graph, spec: NoiseSpec) -> Tuple[Graph, EdgePerturbation]:
    """随机增删边并返回具体的增删记录

    共执行 floor(r·|E|) 次操作，每次以 1/2 概率删除一条随机已有边（不让任何端点变成孤立节点），
    否则添加一条随机的不存在的节点对，权重为1。自环不参与扰动。

    Raises:
        EdgeNoiseError: 0 < r·|E| < 1，或无法再删除/添加
    """
    if spec.edge_ratio == 0.0:
        return g, EdgePerturbation(added=(), removed=())

    n_ops = math.floor(spec.edge_ratio * g.num_edges)
    if n_ops < 1:
        raise EdgeNoiseError(
            f"edge_ratio={spec.edge_ratio} on {g.num_edges} edges gives no whole operation"
        )

    rng = spec.edge_rng()
    edges = _EdgeSet(g)
    added: List[Tuple[int, int]] = []
    removed: List[Tuple[int, int]] = []
    for _ in range(n_ops):
        if rng.random() < 0.5:
            pair = _pick_removal(edges, rng)
            edges.remove(pair)
            removed.append(pair)
        else:
            pair = _pick_addition(edges, g.n, rng)
            edges.add(pair)
            added.append(pair)

    loops = g.src == g.dst
    edge_rows = [(i, j, edges.weights[(i, j)]) for i, j in edges.pairs]
    edge_rows += [(int(i), int(i), float(w)) for i, w in zip(g.src[loops], g.weight[loops])]
    perturbed = build_graph(g.n, edge_rows, allow_self_loops=bool(np.any(loops)))
    logger.debug(f"edge noise r={spec.edge_ratio}: +{len(added)} / -{len(removed)} edges")
    return perturbed, EdgePerturbation(added=tuple(added), removed=tuple(removed))


def inject_edge_noise(g: Graph, spec: NoiseSpec) -> Graph:
    """随机增删边，只返回扰动后的图"""
    perturbed, _ = perturb_edges(g, spec)
    return perturbed
