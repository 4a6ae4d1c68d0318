"""
训练/验证/测试划分
"""

from dataclasses import replace
from typing import Tuple

import numpy as np
from loguru import logger

from ..exceptions import SplitError
from ..models.dataset import LabeledDataset

# 默认每类训练节点数
TRAIN_PER_CLASS = 20


def default_split_sizes(ds: LabeledDataset) -> Tuple[int, int, int]:
    """每类20个训练节点，验证集 min(500, 剩余/3)，测试集 min(1000, 剩余)

    最小的类别不足以提供20个节点时，每类训练数降为该类节点数的1/5（至少1个）。
    """
    counts = np.bincount(ds.labels, minlength=ds.num_classes)
    per_class = min(TRAIN_PER_CLASS, max(1, int(counts.min()) // 5))
    train = per_class * ds.num_classes
    rest = ds.num_nodes - train
    val = min(500, rest // 3)
    test = min(1000, rest - val)
    return train, val, test


def make_split(
    ds: LabeledDataset,
    sizes: Tuple[int, int, int],
    per_class_train: bool = True,
    seed: int = 0,
) -> LabeledDataset:
    """随机划分节点

    Args:
        ds: 数据集
        sizes: (train, val, test) 节点数
        per_class_train: 训练集每类取相同数量
        seed: 随机种子

    Returns:
        带划分的新 LabeledDataset，索引升序

    Raises:
        SplitError: 总数超过 N、训练数不能被类别数整除或某类节点不足
    """
    n_train, n_val, n_test = (int(s) for s in sizes)
    if min(n_train, n_val, n_test) < 0:
        raise SplitError(f"split sizes must be >= 0, got {sizes}")
    if n_train + n_val + n_test > ds.num_nodes:
        raise SplitError(f"split sizes {sizes} exceed {ds.num_nodes} nodes")

    rng = np.random.default_rng(seed)
    if per_class_train:
        n_classes = ds.num_classes
        if n_train % n_classes:
            raise SplitError(f"train size {n_train} not divisible by {n_classes} classes")
        per_class = n_train // n_classes
        picked = []
        for c in range(n_classes):
            members = np.flatnonzero(ds.labels == c)
            if members.size < per_class:
                raise SplitError(f"class {c} has {members.size} nodes, needs {per_class} for training")
            picked.append(rng.permutation(members)[:per_class])
        train_idx = np.sort(np.concatenate(picked)) if picked else np.zeros(0, dtype=np.int64)
    else:
        train_idx = np.sort(rng.permutation(ds.num_nodes)[:n_train])

    remaining = np.setdiff1d(np.arange(ds.num_nodes), train_idx)
    remaining = rng.permutation(remaining)
    val_idx = np.sort(remaining[:n_val])
    test_idx = np.sort(remaining[n_val:n_val + n_test])
    logger.debug(f"split sizes train={train_idx.size}, val={val_idx.size}, test={test_idx.size}")
    return replace(
        ds,
        train_idx=train_idx.astype(np.int64),
        val_idx=val_idx.astype(np.int64),
        test_idx=test_idx.astype(np.int64),
    )
