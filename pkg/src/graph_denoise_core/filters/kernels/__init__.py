from .gsdn import GsdnefKernel, GsdnefSparseKernel, GsdnfKernel
from .spectral import ChebyKernel, GcnKernel, IdentityKernel, NoRenormKernel, SgcKernel

__all__ = [
    "ChebyKernel",
    "GcnKernel",
    "GsdnefKernel",
    "GsdnefSparseKernel",
    "GsdnfKernel",
    "IdentityKernel",
    "NoRenormKernel",
    "SgcKernel",
]
