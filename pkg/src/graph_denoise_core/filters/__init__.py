"""
滤波器模块 - 多项式图卷积核

提供函数式接口（cheby_apply / gcn_apply / ...）与按名称创建的核对象（KernelFactory）。
"""

from .base import BaseKernel
from .edge_denoise import DENSE_EDGE_CAP, gsdnef_denoise_adjacency
from .factory import KernelFactory
from .polynomial import (
    RenormalizationGap,
    cheby_apply,
    cheby_basis,
    gcn_apply,
    gsdnef_apply,
    gsdnf_apply,
    gsdnf_cheby_coeffs,
    largest_laplacian_eigenvalue,
    no_renorm_apply,
    renormalization_gap,
    resolve_lambda_max,
    sgc_apply,
)

__all__ = [
    "BaseKernel",
    "KernelFactory",
    "DENSE_EDGE_CAP",
    "gsdnef_denoise_adjacency",
    "RenormalizationGap",
    "cheby_apply",
    "cheby_basis",
    "gcn_apply",
    "gsdnef_apply",
    "gsdnf_apply",
    "gsdnf_cheby_coeffs",
    "largest_laplacian_eigenvalue",
    "no_renorm_apply",
    "renormalization_gap",
    "resolve_lambda_max",
    "sgc_apply",
]
