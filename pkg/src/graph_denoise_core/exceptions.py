"""
异常定义 - 工具包统一的错误类型

所有异常都继承自 GraphDenoiseError，同时继承对应的内置异常
（输入错误为 ValueError，计算失败为 RuntimeError），调用方按内置类型捕获也能正常工作。
"""

from typing import Optional


class GraphDenoiseError(Exception):
    """工具包异常基类"""


class GraphValidationError(GraphDenoiseError, ValueError):
    """图构建参数非法：索引越界、权重非有限或非正"""


class IsolatedNodeError(GraphDenoiseError, ValueError):
    """存在度为0的节点，无法做 D^{-1/2} 归一化"""

    def __init__(self, node: int, context: str = "normalization"):
        self.node = int(node)
        super().__init__(f"node {self.node} is isolated (degree 0) during {context}")


class DimensionMismatchError(GraphDenoiseError, ValueError):
    """算子与特征矩阵维度不一致"""


class AsymmetricMatrixError(GraphDenoiseError, ValueError):
    """矩阵不对称"""


class OracleCapExceededError(GraphDenoiseError, ValueError):
    """稠密计算规模超过上限"""


class AlphaRangeError(GraphDenoiseError, ValueError):
    """alpha 超出允许区间"""


class SolverError(GraphDenoiseError, RuntimeError):
    """线性方程求解失败"""


class EdgeNoiseError(GraphDenoiseError, ValueError):
    """边噪声无法按要求注入"""


class UndefinedCorrelationError(GraphDenoiseError, ValueError):
    """常数序列导致相关系数无定义"""


class DatasetFormatError(GraphDenoiseError, ValueError):
    """数据文件格式错误"""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[str] = None):
        self.line = line
        self.path = path
        location = ""
        if path is not None:
            location += f"{path}"
        if line is not None:
            location += f":{line}"
        super().__init__(f"{location}: {message}" if location else message)


class SplitError(GraphDenoiseError, ValueError):
    """训练/验证/测试划分无法满足"""


class DisconnectedGraphError(GraphDenoiseError, RuntimeError):
    """生成的图不连通"""


class TrainingDivergedError(GraphDenoiseError, RuntimeError):
    """训练过程中损失变为 NaN/Inf"""

    def __init__(self, epoch: int, loss: float):
        self.epoch = int(epoch)
        self.loss = loss
        super().__init__(f"training diverged at epoch {self.epoch} (loss={loss})")


class UnknownKernelError(GraphDenoiseError, ValueError):
    """未注册的卷积核名称"""


class ManifestError(GraphDenoiseError, ValueError):
    """运行清单校验失败"""
