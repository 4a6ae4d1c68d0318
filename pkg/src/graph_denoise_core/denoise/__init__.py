"""
去噪实验模块 - 噪声注入、去噪度量、联合去噪求解与注意力诊断
"""

from .attention import EdgeAttention, attention_coefficients, prop2_attention_correlation
from .metrics import denoise_report, per_node_distance
from .noise import (
    NormalizedFeatures,
    inject_edge_noise,
    inject_feature_noise,
    normalize_features,
    perturb_edges,
)
from .problem2 import problem2_solve

__all__ = [
    "EdgeAttention",
    "NormalizedFeatures",
    "attention_coefficients",
    "denoise_report",
    "inject_edge_noise",
    "inject_feature_noise",
    "normalize_features",
    "per_node_distance",
    "perturb_edges",
    "prop2_attention_correlation",
    "problem2_solve",
]
