"""
Graph Denoise Core - 图信号去噪工具包

提供图算子、谱域基准解、GSDN 系列卷积核、去噪与偏差-方差实验、节点分类和数据集生成等功能
"""

__version__ = "0.1.0"
__author__ = "Graph Denoise Team"

from .exceptions import GraphDenoiseError
from .filters import KernelFactory
from .graph import build_graph, normalized_ops, total_variation
from .models import *

__all__ = [
    "GraphDenoiseError",
    "KernelFactory",
    "build_graph",
    "normalized_ops",
    "total_variation",
]
