from abc import ABC, abstractmethod
from typing import List, Optional

import numpy as np
from loguru import logger

from ..models.config import DenoiseConfig
from ..models.graph import NormalizedOps


class BaseKernel(ABC):
    """Base graph-convolution kernel that defines the interface for all kernels

    A kernel is a fixed linear operator on N×F feature matrices. Learned weights
    live in the classifier; the kernel only exposes its basis terms so that
    multi-term kernels (ChebyNet) can give every term its own weight block.
    """

    name: str = ""

    def __init__(self, ops: NormalizedOps, cfg: Optional[DenoiseConfig] = None, **kwargs):
        self.ops = ops
        self.cfg = cfg if cfg is not None else DenoiseConfig()
        if kwargs:
            logger.debug(f"kernel {self.name!r} ignores options {sorted(kwargs)}")

    @abstractmethod
    def apply(self, x) -> np.ndarray:
        """Apply the kernel to a feature matrix"""
        pass

    @property
    def n_terms(self) -> int:
        return 1

    def basis(self, x) -> List[np.ndarray]:
        """Basis terms fed to the weight matrix; single-term kernels return [apply(x)]"""
        return [self.apply(x)]

    def basis_adjoint(self, grads: List[np.ndarray]) -> np.ndarray:
        """Pull gradients w.r.t. basis terms back to the kernel input.

        Every kernel here is a polynomial in a symmetric operator, so the adjoint
        of each term is the term itself.
        """
        return self.apply(grads[0])

    def propagate(self, x) -> np.ndarray:
        """Concatenate the basis terms column-wise: N × (F·n_terms)"""
        terms = self.basis(x)
        return terms[0] if len(terms) == 1 else np.hstack(terms)

    def propagate_adjoint(self, grad: np.ndarray) -> np.ndarray:
        """Adjoint of propagate"""
        blocks = np.split(grad, self.n_terms, axis=1)
        return self.basis_adjoint(blocks)
