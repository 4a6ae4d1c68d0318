"""
分析模块 - 偏差-方差分解
"""

from .bias_variance import Monotonicity, default_signal, mc_bias_variance, prop3_monotonicity_check

__all__ = ["Monotonicity", "default_signal", "mc_bias_variance", "prop3_monotonicity_check"]
