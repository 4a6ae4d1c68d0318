"""
谱方法基准 - 稠密特征分解与闭式解

只用于小图上的验证：所有多项式近似都以这里的精确解为对照。
"""

import warnings
from typing import Optional, Tuple, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from loguru import logger

from ..exceptions import (
    AlphaRangeError,
    AsymmetricMatrixError,
    DimensionMismatchError,
    OracleCapExceededError,
    SolverError,
)
from ..graph.core import as_features
from ..models.graph import EigenSystem, NormalizedOps

DEFAULT_DENSE_CAP = 2000
SYMMETRY_TOL = 1e-10


def _dense(op) -> np.ndarray:
    if sp.issparse(op):
        return op.toarray()
    return np.asarray(op, dtype=np.float64)


def check_dense_cap(n: int, cap: int) -> None:
    if n > cap:
        raise OracleCapExceededError(f"dense oracle limited to {cap} nodes, got {n}")


def _check_alpha(alpha: float) -> None:
    if not (0.0 < alpha < 1.0):
        raise AlphaRangeError(f"closed forms require 0 < alpha < 1, got {alpha}")


def eigendecompose(op, cap: int = DEFAULT_DENSE_CAP) -> EigenSystem:
    """对称算子的稠密特征分解

    特征值升序；每个特征向量中绝对值最大的元素取正（并列时取最靠前的一个）。

    Raises:
        AsymmetricMatrixError: 非对称超过 1e-10
        OracleCapExceededError: 规模超过上限
    """
    m = _dense(op)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatchError(f"operator must be square, got shape {m.shape}")
    check_dense_cap(m.shape[0], cap)
    asym = float(np.max(np.abs(m - m.T))) if m.size else 0.0
    if asym > SYMMETRY_TOL:
        raise AsymmetricMatrixError(f"operator asymmetric by {asym:.3e}")

    values, vectors = scipy.linalg.eigh((m + m.T) / 2.0)
    mags = np.abs(vectors)
    for k in range(vectors.shape[1]):
        col = mags[:, k]
        lead = int(np.flatnonzero(col >= col.max() - 1e-12)[0])
        if vectors[lead, k] < 0:
            vectors[:, k] = -vectors[:, k]
    vectors.flags.writeable = False
    values.flags.writeable = False
    return EigenSystem(vectors=vectors, values=values)


def graph_fourier(eig: EigenSystem, x) -> np.ndarray:
    """图傅里叶变换 x̄ = V^T x"""
    x = as_features(x, eig.n)
    return eig.vectors.T @ x


def inverse_graph_fourier(eig: EigenSystem, x_bar) -> np.ndarray:
    """逆变换 x = V x̄"""
    x_bar = as_features(x_bar, eig.n, name="x_bar")
    return eig.vectors @ x_bar


def resolvent_solve(a_dense: np.ndarray, x: np.ndarray, alpha: float) -> np.ndarray:
    """稠密求解 (1-α)(I - αM)^{-1} x

    closed_form_denoise 与 problem2_solve 共用这一条求解路径。

    Raises:
        SolverError: 奇异或病态
    """
    n = a_dense.shape[0]
    system = np.eye(n) - alpha * a_dense
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("error", scipy.linalg.LinAlgWarning)
            y = scipy.linalg.solve(system, x, assume_a="sym")
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError, scipy.linalg.LinAlgWarning) as e:
        raise SolverError(f"resolvent solve failed for alpha={alpha}: {e}") from e
    if not np.all(np.isfinite(y)):
        raise SolverError(f"resolvent solve produced non-finite values for alpha={alpha}")
    return (1.0 - alpha) * y


def closed_form_denoise(
    ops: NormalizedOps,
    x,
    alpha: float,
    cap: int = DEFAULT_DENSE_CAP,
) -> np.ndarray:
    """特征去噪问题的精确解 (1-α)(I - αA_n)^{-1} X，α = 1/(1+γ)"""
    _check_alpha(alpha)
    check_dense_cap(ops.n, cap)
    x = as_features(x, ops.n)
    return resolvent_solve(ops.a_norm.toarray(), x, alpha)


def polynomial_response(omega: np.ndarray, alpha: float, k_order: Optional[int] = None) -> np.ndarray:
    """GSDN-F 在 A_n 特征值 ω 处的谱响应

    k_order 为 None 时取精确预解式 (1-α)/(1-αω)，否则为截断和 (1-α)Σ_{k≤K}(αω)^k。
    """
    omega = np.asarray(omega, dtype=np.float64)
    if k_order is None:
        return (1.0 - alpha) / (1.0 - alpha * omega)
    acc = np.ones_like(omega)
    for _ in range(k_order):
        acc = 1.0 + alpha * omega * acc
    return (1.0 - alpha) * acc


def closed_form_var_bias(
    eig: EigenSystem,
    alpha: float,
    x_hat,
    noise_cov: Union[float, np.ndarray],
    k_order: Optional[int] = None,
) -> Tuple[float, float]:
    """方差 Tr(H²Σ) 与偏差平方 ||(H - I)x̂||² 的闭式值

    Args:
        eig: A_n 的特征分解
        alpha: 0 < α < 1
        x_hat: 单列真实信号
        noise_cov: 标量 σ²、逐节点方差向量或完整协方差矩阵
        k_order: 截断阶数，None 表示精确预解式

    Returns:
        (variance, bias_sq)
    """
    _check_alpha(alpha)
    x_hat = as_features(x_hat, eig.n, name="x_hat")
    if x_hat.ndim == 2:
        if x_hat.shape[1] != 1:
            raise DimensionMismatchError("x_hat must be a single column")
        x_hat = x_hat[:, 0]

    h = polynomial_response(eig.values, alpha, k_order)
    q = eig.vectors

    cov = np.asarray(noise_cov, dtype=np.float64)
    if cov.ndim == 0:
        variance = float(cov) * float(np.sum(h ** 2))
    elif cov.ndim == 1:
        if cov.shape[0] != eig.n:
            raise DimensionMismatchError("noise variance vector must have one entry per node")
        variance = float(np.sum(((q ** 2) @ (h ** 2)) * cov))
    elif cov.shape == (eig.n, eig.n):
        h_sq = (q * h ** 2) @ q.T
        variance = float(np.sum(h_sq * cov.T))
    else:
        raise DimensionMismatchError(f"noise covariance shape {cov.shape} does not match N={eig.n}")

    coords = q.T @ x_hat
    bias_sq = float(np.sum(((h - 1.0) * coords) ** 2))
    logger.debug(f"closed form alpha={alpha}: variance={variance:.6e}, bias_sq={bias_sq:.6e}")
    return variance, bias_sq
