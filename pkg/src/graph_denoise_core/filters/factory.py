from typing import Dict, List, Optional, Type

from ..exceptions import UnknownKernelError
from ..models.config import DenoiseConfig
from ..models.graph import NormalizedOps
from .base import BaseKernel
from .kernels import (
    ChebyKernel,
    GcnKernel,
    GsdnefKernel,
    GsdnefSparseKernel,
    GsdnfKernel,
    IdentityKernel,
    NoRenormKernel,
    SgcKernel,
)


class KernelFactory:
    """Factory class for creating kernels by name"""

    _kernels: Dict[str, Type[BaseKernel]] = {
        "identity": IdentityKernel,
        "cheby": ChebyKernel,
        "gcn": GcnKernel,
        "sgc": SgcKernel,
        "gsdn-f": GsdnfKernel,
        "gsdn-ef": GsdnefKernel,
        "gsdn-ef-sparse": GsdnefSparseKernel,
        "i-plus-an": NoRenormKernel,
    }

    @classmethod
    def create_kernel(
        cls,
        name: str,
        ops: NormalizedOps,
        cfg: Optional[DenoiseConfig] = None,
        **options,
    ) -> BaseKernel:
        """Create a kernel instance

        Args:
            name: Kernel name (e.g. 'gsdn-f')
            ops: Normalized operators of the graph
            cfg: Optional denoise configuration
            **options: Kernel specific options (graph/features for gsdn-ef,
                lambda_max/coeffs for cheby, k for sgc)

        Returns:
            BaseKernel: Kernel instance

        Raises:
            UnknownKernelError: If name is not registered
        """
        if name not in cls._kernels:
            raise UnknownKernelError(
                f"Unsupported kernel: {name}. Supported kernels: {cls.get_supported_kernels()}"
            )
        return cls._kernels[name](ops, cfg, **options)

    @classmethod
    def get_supported_kernels(cls) -> List[str]:
        """Get list of supported kernel names"""
        return list(cls._kernels.keys())

    @classmethod
    def register_kernel(cls, name: str, kernel_class: Type[BaseKernel]):
        """Register a new kernel

        Args:
            name: Kernel name
            kernel_class: Class that inherits from BaseKernel
        """
        if not issubclass(kernel_class, BaseKernel):
            raise TypeError(f"{kernel_class!r} is not a BaseKernel")
        cls._kernels[name] = kernel_class
