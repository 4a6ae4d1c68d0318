"""
去噪效果度量
"""

import numpy as np

from ..exceptions import DimensionMismatchError
from ..graph.core import as_features, total_variation
from ..models.graph import NormalizedOps
from ..models.report import DenoiseReport


def per_node_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """逐节点欧氏距离 ||a_i - b_i||_2"""
    diff = (a - b).reshape(a.shape[0], -1)
    return np.sqrt(np.sum(diff * diff, axis=1))


def denoise_report(
    ops: NormalizedOps,
    kernel_output,
    ground_truth,
    noisy_input,
) -> DenoiseReport:
    """生成去噪报告

    Args:
        ops: 归一化算子（用于计算总变差）
        kernel_output: 卷积输出
        ground_truth: 加噪前的真实特征
        noisy_input: 含噪输入

    Returns:
        DenoiseReport: 输出与输入各自到真实特征的逐节点距离及总变差

    Raises:
        DimensionMismatchError: 三个矩阵形状不一致
    """
    out = as_features(kernel_output, ops.n, name="kernel_output")
    truth = as_features(ground_truth, ops.n, name="ground_truth")
    noisy = as_features(noisy_input, ops.n, name="noisy_input")
    if not (out.shape == truth.shape == noisy.shape):
        raise DimensionMismatchError(
            f"shape mismatch: output {out.shape}, truth {truth.shape}, noisy {noisy.shape}"
        )

    after = per_node_distance(out, truth)
    before = per_node_distance(noisy, truth)
    return DenoiseReport(
        per_node_noise=after,
        per_node_noise_before=before,
        mean_noise=float(after.mean()) if after.size else 0.0,
        mean_noise_before=float(before.mean()) if before.size else 0.0,
        tv_before=total_variation(ops, noisy),
        tv_after=total_variation(ops, out),
    )
