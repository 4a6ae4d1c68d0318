"""
谱模块 - 小图上的精确基准
"""

from .oracle import (
    DEFAULT_DENSE_CAP,
    check_dense_cap,
    closed_form_denoise,
    closed_form_var_bias,
    eigendecompose,
    graph_fourier,
    inverse_graph_fourier,
    polynomial_response,
    resolvent_solve,
)

__all__ = [
    "DEFAULT_DENSE_CAP",
    "check_dense_cap",
    "closed_form_denoise",
    "closed_form_var_bias",
    "eigendecompose",
    "graph_fourier",
    "inverse_graph_fourier",
    "polynomial_response",
    "resolvent_solve",
]
