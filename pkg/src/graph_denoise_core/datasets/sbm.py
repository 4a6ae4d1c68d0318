"""
随机块模型 - 带平滑真实特征的合成图
"""

from dataclasses import replace
from pathlib import Path
from typing import Dict, NamedTuple, Optional, Tuple, Union

import numpy as np
import scipy.sparse as sp
from loguru import logger
from scipy.sparse.csgraph import connected_components
from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from ..denoise.noise import normalize_features
from ..exceptions import DisconnectedGraphError
from ..graph.core import total_variation
from ..models.config import SbmSpec
from ..models.dataset import LabeledDataset
from ..models.graph import Graph, NormalizedOps
from .citation import write_citation_files
from .manifest import write_dataset_manifest
from .split import default_split_sizes, make_split

MAX_ATTEMPTS = 20


class SbmDataset(NamedTuple):
    dataset: LabeledDataset
    ground_truth: np.ndarray


def community_labels(n_nodes: int, n_communities: int) -> np.ndarray:
    """按顺序分配社区，余数节点依次分给前面的社区"""
    base, extra = divmod(n_nodes, n_communities)
    sizes = [base + (1 if c < extra else 0) for c in range(n_communities)]
    return np.repeat(np.arange(n_communities), sizes)


def _sample_graph(spec: SbmSpec, labels: np.ndarray, rng: np.random.Generator) -> Graph:
    n = spec.n_nodes
    same = labels[:, None] == labels[None, :]
    prob = np.where(same, spec.p_in, spec.p_out)
    draws = rng.random((n, n)) < prob
    rows, cols = np.nonzero(np.triu(draws, k=1))
    src, dst = rows.astype(np.int64), cols.astype(np.int64)
    weight = np.ones(src.size)
    for arr in (src, dst, weight):
        arr.flags.writeable = False
    graph = Graph(n=n, src=src, dst=dst, weight=weight)

    degree = np.bincount(src, minlength=n) + np.bincount(dst, minlength=n)
    isolated = np.flatnonzero(degree == 0)
    if isolated.size:
        raise DisconnectedGraphError(f"sampled SBM has {isolated.size} isolated node(s), first {isolated[0]}")
    if spec.require_connected:
        n_parts, _ = connected_components(sp.csr_matrix(graph.adjacency()), directed=False)
        if n_parts != 1:
            raise DisconnectedGraphError(f"sampled SBM has {n_parts} connected components")
    return graph


def planted_features(spec: SbmSpec, labels: np.ndarray) -> np.ndarray:
    """社区 c 占用第 c 段 topic_size 个维度，行归一化后乘以 community_mean_scale"""
    truth = np.zeros((labels.size, spec.feature_dim))
    start = labels * spec.topic_size
    for offset in range(spec.topic_size):
        truth[np.arange(labels.size), start + offset] = 1.0
    return normalize_features(truth, spec.feature_norm).features * spec.community_mean_scale


def gen_sbm(spec: SbmSpec, split_sizes: Optional[Tuple[int, int, int]] = None) -> SbmDataset:
    """生成随机块模型数据集

    真实特征为社区主题的稀疏指示向量（社区之间两两正交），观测特征 = 真实特征 + N(0, σ²)。
    出现孤立节点（或 require_connected 时图不连通）则换用下一个派生种子重新采样，最多 20 次。

    Args:
        spec: SBM 参数
        split_sizes: (train, val, test)，默认每类20个训练节点

    Returns:
        SbmDataset(dataset, ground_truth)

    Raises:
        DisconnectedGraphError: 20 次采样都不满足要求
    """
    labels = community_labels(spec.n_nodes, spec.n_communities)
    attempt = 0

    def sample() -> Graph:
        nonlocal attempt
        rng = np.random.default_rng([spec.seed, attempt])
        attempt += 1
        return _sample_graph(spec, labels, rng)

    graph = Retrying(
        stop=stop_after_attempt(MAX_ATTEMPTS),
        retry=retry_if_exception_type(DisconnectedGraphError),
        reraise=True,
    )(sample)
    if attempt > 1:
        logger.info(f"SBM accepted after {attempt} attempt(s)")

    truth = planted_features(spec, labels)
    observed = truth.copy()
    if spec.feature_noise_sigma > 0:
        noise_rng = np.random.default_rng([spec.seed, MAX_ATTEMPTS + 1])
        observed = truth + noise_rng.normal(0.0, spec.feature_noise_sigma, size=truth.shape)

    metadata = {"name": "sbm", "spec": spec.to_dict(), "attempts": attempt}
    ds = LabeledDataset(graph=graph, features=observed, labels=labels, metadata=metadata)
    sizes = split_sizes if split_sizes is not None else default_split_sizes(ds)
    ds = make_split(ds, sizes, per_class_train=True, seed=spec.seed)
    logger.debug(f"SBM N={graph.n}, |E|={graph.num_edges}, split={sizes}")
    return SbmDataset(dataset=ds, ground_truth=truth)


def smoothness_permutation_test(
    ops: NormalizedOps,
    features: np.ndarray,
    n_permutations: int = 1000,
    seed: int = 0,
) -> float:
    """随机置换节点特征行，返回置换后总变差大于原始总变差的比例"""
    planted = total_variation(ops, features)
    rng = np.random.default_rng(seed)
    exceed = 0
    for _ in range(n_permutations):
        perm = rng.permutation(ops.n)
        if total_variation(ops, features[perm]) > planted:
            exceed += 1
    return exceed / n_permutations


def write_sbm_files(
    sbm: SbmDataset,
    out_dir: Union[str, Path],
    name: str = "sbm",
) -> Dict[str, Path]:
    """以引文原始格式写出 SBM 数据集，附带 .truth 与 manifest.json"""
    ds = replace(
        sbm.dataset,
        metadata={
            **sbm.dataset.metadata,
            "node_ids": [str(i) for i in range(sbm.dataset.num_nodes)],
            "label_names": [f"class_{k:03d}" for k in range(sbm.dataset.num_classes)],
        },
    )
    paths = write_citation_files(ds, out_dir, name, truth=sbm.ground_truth)
    paths["manifest"] = write_dataset_manifest(out_dir, name, paths, ds)
    return paths
