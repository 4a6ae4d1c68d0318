"""
多项式图卷积 - ChebyNet、GCN、SGC、GSDN-F 及 I + A_n

所有函数都是线性、纯函数，只做稀疏矩阵乘法，不构造稠密幂次。
"""

from typing import List, NamedTuple, Optional

import numpy as np
import scipy.linalg
from numpy.polynomial import Chebyshev, Polynomial
from loguru import logger

from ..exceptions import GraphValidationError
from ..graph.core import as_features, spmm
from ..models.config import ChebyCoeffs, DenoiseConfig
from ..models.graph import NormalizedOps
from ..spectral.oracle import DEFAULT_DENSE_CAP, check_dense_cap

# α 超过该值时截断级数随 K 发散
ALPHA_DIVERGENCE_WARN = 2.0


def _as_matrix(ops: NormalizedOps, x) -> np.ndarray:
    return as_features(x, ops.n)


def _scaled_laplacian(ops: NormalizedOps, x: np.ndarray, lambda_max: float) -> np.ndarray:
    """L̃_n x = (2/λ_max) L_n x - x"""
    return (2.0 / lambda_max) * spmm(ops.lap_norm, x) - x


def cheby_basis(ops: NormalizedOps, k_order: int, x, lambda_max: float = 2.0) -> List[np.ndarray]:
    """Chebyshev 基 [T_0(L̃_n)x, ..., T_K(L̃_n)x]，按三项递推计算"""
    x = _as_matrix(ops, x)
    terms = [x]
    if k_order >= 1:
        terms.append(_scaled_laplacian(ops, x, lambda_max))
    for _ in range(2, k_order + 1):
        terms.append(2.0 * _scaled_laplacian(ops, terms[-1], lambda_max) - terms[-2])
    return terms


def cheby_apply(ops: NormalizedOps, coeffs: ChebyCoeffs, x) -> np.ndarray:
    """ChebyNet 滤波 Σ_k θ_k T_k(L̃_n) x"""
    terms = cheby_basis(ops, coeffs.k_order, x, coeffs.lambda_max)
    out = coeffs.theta[0] * terms[0]
    for theta, term in zip(coeffs.theta[1:], terms[1:]):
        out = out + theta * term
    return out


def gcn_apply(ops: NormalizedOps, x) -> np.ndarray:
    """GCN 一阶滤波 Ã_n x"""
    return spmm(ops.a_renorm, _as_matrix(ops, x))


def sgc_apply(ops: NormalizedOps, k: int, x) -> np.ndarray:
    """SGC 滤波 Ã_n^k x，k 次连续稀疏乘法"""
    if int(k) != k or k < 1:
        raise ValueError(f"sgc order must be an integer >= 1, got {k}")
    y = _as_matrix(ops, x)
    for _ in range(int(k)):
        y = spmm(ops.a_renorm, y)
    return y


def _truncated_neumann(adjacency, alpha: float, k_order: int, x: np.ndarray) -> np.ndarray:
    """Horner 形式的 (1-α) Σ_{k≤K} (αM)^k x"""
    y = x
    for _ in range(k_order):
        y = x + alpha * spmm(adjacency, y)
    return (1.0 - alpha) * y


def gsdnf_apply(ops: NormalizedOps, cfg: DenoiseConfig, x) -> np.ndarray:
    """GSDN-F 滤波 (1-α) Σ_{k=0}^{K} (αA_n)^k x

    α > 1 时 (1-α) 为负；α ≥ 2 时记录发散警告但照常计算。
    """
    x = _as_matrix(ops, x)
    if cfg.alpha >= ALPHA_DIVERGENCE_WARN:
        logger.warning(f"alpha={cfg.alpha} >= {ALPHA_DIVERGENCE_WARN}: truncated series diverges in K")
    return _truncated_neumann(ops.a_norm, cfg.alpha, cfg.k_order, x)


def gsdnef_apply(denoised: NormalizedOps, cfg: DenoiseConfig, x) -> np.ndarray:
    """GSDN-EF 滤波，与 gsdnf_apply 相同但作用在去噪后的 Â_n 上"""
    return gsdnf_apply(denoised, cfg, x)


def no_renorm_apply(ops: NormalizedOps, x) -> np.ndarray:
    """不做重归一化的一阶核 (I + A_n) x"""
    x = _as_matrix(ops, x)
    return x + spmm(ops.a_norm, x)


def gsdnf_cheby_coeffs(alpha: float, k_order: int, lambda_max: float = 2.0) -> ChebyCoeffs:
    """把 GSDN-F 的截断级数改写为 Chebyshev 系数

    A_n = (1 - λ_max/2) I - (λ_max/2) L̃_n，因此 (1-α)Σ(αA_n)^k 是 L̃_n 的 K 次多项式，
    用这组系数的 cheby_apply 与 gsdnf_apply 给出相同结果。
    """
    if int(k_order) != k_order or k_order < 0:
        raise ValueError(f"k_order must be a non-negative integer, got {k_order}")
    k_order = int(k_order)
    series = Polynomial([(1.0 - alpha) * alpha ** k for k in range(k_order + 1)])
    a_of_t = Polynomial([1.0 - lambda_max / 2.0, -lambda_max / 2.0])
    cheb = series(a_of_t).convert(kind=Chebyshev)
    theta = np.zeros(k_order + 1)
    theta[: min(cheb.coef.size, k_order + 1)] = cheb.coef[: k_order + 1]
    return ChebyCoeffs(theta=tuple(theta), lambda_max=lambda_max)


def largest_laplacian_eigenvalue(ops: NormalizedOps, cap: int = DEFAULT_DENSE_CAP) -> float:
    """L_n 的最大特征值 λ_N（稠密计算，受规模上限约束）"""
    check_dense_cap(ops.n, cap)
    lap = ops.lap_norm.toarray()
    values = scipy.linalg.eigh((lap + lap.T) / 2.0, eigvals_only=True,
                               subset_by_index=[ops.n - 1, ops.n - 1])
    return float(values[0])


class RenormalizationGap(NamedTuple):
    relative_gap: float
    effective_alpha: np.ndarray


def renormalization_gap(ops: NormalizedOps) -> RenormalizationGap:
    """比较 Ã_n 与近似式 D̃^{-1} + D_r A_n

    Returns:
        relative_gap: ||Ã_n - (D̃^{-1} + D_r A_n)||_F / ||Ã_n||_F，正则图上为0
        effective_alpha: 每个节点的收缩系数 d_i / d̃_i
    """
    if ops.n == 0:
        raise GraphValidationError("renormalization gap undefined for an empty graph")
    approx = ops.d_tilde_inv + ops.d_ratio @ ops.a_norm
    diff = (ops.a_renorm - approx).toarray()
    denom = float(np.linalg.norm(ops.a_renorm.toarray()))
    gap = float(np.linalg.norm(diff)) / denom
    return RenormalizationGap(relative_gap=gap, effective_alpha=ops.d_ratio.diagonal().copy())


def resolve_lambda_max(ops: NormalizedOps, lambda_max: Optional[float]) -> float:
    """None 表示使用实际计算的 λ_N"""
    if lambda_max is None:
        computed = largest_laplacian_eigenvalue(ops)
        logger.debug(f"computed lambda_max={computed:.6f}")
        return computed
    return float(lambda_max)
