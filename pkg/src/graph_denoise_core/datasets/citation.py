"""
引文网络原始格式读写

.content 每行: <节点id> <f_1> ... <f_F> <类别名>
.cites   每行: <被引id> <施引id>
.truth   每行: <节点id> <f_1> ... <f_F>（可选，合成数据的真实特征）

字段以空白分隔。引用关系视为无向边，重复与反向的引用合并为一条权重为1的边。
"""

from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np
from loguru import logger

from ..exceptions import DatasetFormatError
from ..graph.core import build_graph
from ..models.dataset import LabeledDataset


def _read_lines(path: Path):
    with open(path, "r", encoding="utf-8") as f:
        for line_no, raw in enumerate(f, start=1):
            tokens = raw.split()
            if tokens:
                yield line_no, tokens


def _parse_floats(tokens: List[str], line_no: int, path: Path) -> List[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError:
        raise DatasetFormatError("non-numeric feature value", line_no, str(path))


def load_citation_raw(
    content_path: Union[str, Path],
    cites_path: Union[str, Path],
) -> LabeledDataset:
    """读取引文网络原始文件

    节点按 .content 中出现的顺序编号为 0..N-1，类别按名称字母序编号。
    引用了不存在节点的行和自引用行被丢弃，数量记录在 metadata 中。

    Raises:
        DatasetFormatError: 行格式错误（含行号）、重复节点或空文件
    """
    content_path = Path(content_path)
    cites_path = Path(cites_path)

    ids: List[str] = []
    index: Dict[str, int] = {}
    rows: List[List[float]] = []
    label_names: List[str] = []
    n_features = None
    for line_no, tokens in _read_lines(content_path):
        if len(tokens) < 3:
            raise DatasetFormatError("expected '<id> <features...> <label>'", line_no, str(content_path))
        node_id, feats, label = tokens[0], tokens[1:-1], tokens[-1]
        if n_features is None:
            n_features = len(feats)
        elif len(feats) != n_features:
            raise DatasetFormatError(
                f"expected {n_features} features, got {len(feats)}", line_no, str(content_path)
            )
        if node_id in index:
            raise DatasetFormatError(f"duplicate node id {node_id!r}", line_no, str(content_path))
        index[node_id] = len(ids)
        ids.append(node_id)
        rows.append(_parse_floats(feats, line_no, content_path))
        label_names.append(label)
    if not ids:
        raise DatasetFormatError("content file is empty", path=str(content_path))

    classes = sorted(set(label_names))
    class_index = {name: k for k, name in enumerate(classes)}
    labels = np.array([class_index[name] for name in label_names], dtype=np.int64)

    pairs = set()
    dangling = 0
    self_cites = 0
    total = 0
    for line_no, tokens in _read_lines(cites_path):
        if len(tokens) != 2:
            raise DatasetFormatError("expected '<cited> <citing>'", line_no, str(cites_path))
        total += 1
        a, b = tokens
        if a not in index or b not in index:
            dangling += 1
            continue
        i, j = index[a], index[b]
        if i == j:
            self_cites += 1
            continue
        pairs.add((min(i, j), max(i, j)))
    if total == 0:
        raise DatasetFormatError("cites file is empty", path=str(cites_path))
    if dangling:
        logger.warning(f"dropped {dangling} citation(s) referencing unknown node ids")
    if self_cites:
        logger.warning(f"dropped {self_cites} self-citation(s)")

    graph = build_graph(len(ids), sorted(pairs))
    features = np.asarray(rows, dtype=np.float64)
    logger.info(
        f"loaded {content_path.stem}: N={graph.n}, |E|={graph.num_edges}, "
        f"C={len(classes)}, F={features.shape[1]}"
    )
    return LabeledDataset(
        graph=graph,
        features=features,
        labels=labels,
        metadata={
            "name": content_path.stem,
            "node_ids": ids,
            "label_names": classes,
            "citations": total,
            "dangling_citations": dangling,
            "self_citations": self_cites,
            "duplicate_citations": total - dangling - self_cites - len(pairs),
        },
    )


def load_truth_features(path: Union[str, Path], ds: LabeledDataset) -> np.ndarray:
    """按数据集的节点顺序读取 .truth 真实特征"""
    path = Path(path)
    index = {node_id: k for k, node_id in enumerate(ds.metadata["node_ids"])}
    truth = np.full((ds.num_nodes, ds.num_features), np.nan)
    for line_no, tokens in _read_lines(path):
        node_id = tokens[0]
        if node_id not in index:
            raise DatasetFormatError(f"unknown node id {node_id!r}", line_no, str(path))
        values = _parse_floats(tokens[1:], line_no, path)
        if len(values) != ds.num_features:
            raise DatasetFormatError(
                f"expected {ds.num_features} values, got {len(values)}", line_no, str(path)
            )
        truth[index[node_id]] = values
    missing = np.flatnonzero(np.isnan(truth).any(axis=1))
    if missing.size:
        raise DatasetFormatError(f"{missing.size} node(s) have no ground-truth row", path=str(path))
    return truth


def _format_row(node_id: str, values: np.ndarray) -> str:
    return "\t".join([node_id] + [repr(float(v)) for v in values])


def write_citation_files(
    ds: LabeledDataset,
    out_dir: Union[str, Path],
    name: str,
    truth: Optional[np.ndarray] = None,
) -> Dict[str, Path]:
    """以原始格式写出数据集，浮点数按 repr 精度保存

    Returns:
        {"content": ..., "cites": ..., ["truth": ...]}
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ids = ds.metadata.get("node_ids") or [str(i) for i in range(ds.num_nodes)]
    label_names = ds.metadata.get("label_names") or [f"class_{k:03d}" for k in range(ds.num_classes)]

    paths = {"content": out_dir / f"{name}.content", "cites": out_dir / f"{name}.cites"}
    with open(paths["content"], "w", encoding="utf-8") as f:
        for i, node_id in enumerate(ids):
            f.write(f"{_format_row(node_id, ds.features[i])}\t{label_names[ds.labels[i]]}\n")
    with open(paths["cites"], "w", encoding="utf-8") as f:
        off = ds.graph.src != ds.graph.dst
        for i, j in zip(ds.graph.src[off], ds.graph.dst[off]):
            f.write(f"{ids[i]}\t{ids[j]}\n")
    if truth is not None:
        paths["truth"] = out_dir / f"{name}.truth"
        with open(paths["truth"], "w", encoding="utf-8") as f:
            for i, node_id in enumerate(ids):
                f.write(_format_row(node_id, truth[i]) + "\n")
    logger.info(f"wrote dataset {name} to {out_dir}")
    return paths
