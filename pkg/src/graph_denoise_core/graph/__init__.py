"""
图模块 - 稀疏对称图、归一化算子与总变差
"""

from .core import (
    as_features,
    build_graph,
    edge_pairs,
    normalize_adjacency,
    normalized_ops,
    path_graph,
    smooth_eigenvector,
    spmm,
    total_variation,
)
from .io import read_edge_list, write_edge_list

__all__ = [
    "as_features",
    "build_graph",
    "edge_pairs",
    "normalize_adjacency",
    "normalized_ops",
    "path_graph",
    "smooth_eigenvector",
    "spmm",
    "total_variation",
    "read_edge_list",
    "write_edge_list",
]
