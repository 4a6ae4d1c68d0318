from typing import List, Optional

import numpy as np

from ...graph.core import as_features
from ...models.config import ChebyCoeffs, DenoiseConfig
from ...models.graph import NormalizedOps
from ..base import BaseKernel
from ..polynomial import (
    cheby_apply,
    cheby_basis,
    gcn_apply,
    gsdnf_cheby_coeffs,
    no_renorm_apply,
    resolve_lambda_max,
    sgc_apply,
)


class IdentityKernel(BaseKernel):
    """No propagation: the plain MLP baseline"""

    name = "identity"

    def apply(self, x) -> np.ndarray:
        return as_features(x, self.ops.n)


class ChebyKernel(BaseKernel):
    """ChebyNet kernel

    As a fixed filter it applies Σθ_k T_k(L̃_n)x; when no coefficients are
    given they default to the GSDN-F re-parametrisation of cfg. As a classifier
    layer it exposes the K+1 terms T_k(L̃_n)x so each gets its own weights.
    """

    name = "cheby"

    def __init__(
        self,
        ops: NormalizedOps,
        cfg: Optional[DenoiseConfig] = None,
        lambda_max: Optional[float] = 2.0,
        coeffs: Optional[ChebyCoeffs] = None,
        **kwargs,
    ):
        super().__init__(ops, cfg, **kwargs)
        if coeffs is None:
            coeffs = gsdnf_cheby_coeffs(
                self.cfg.alpha, self.cfg.k_order, resolve_lambda_max(ops, lambda_max)
            )
        self.coeffs = coeffs

    @property
    def n_terms(self) -> int:
        return self.coeffs.k_order + 1

    def apply(self, x) -> np.ndarray:
        return cheby_apply(self.ops, self.coeffs, x)

    def basis(self, x) -> List[np.ndarray]:
        return cheby_basis(self.ops, self.coeffs.k_order, x, self.coeffs.lambda_max)

    def basis_adjoint(self, grads: List[np.ndarray]) -> np.ndarray:
        out = None
        for k, grad in enumerate(grads):
            term = cheby_basis(self.ops, k, grad, self.coeffs.lambda_max)[-1]
            out = term if out is None else out + term
        return out


class GcnKernel(BaseKernel):
    name = "gcn"

    def apply(self, x) -> np.ndarray:
        return gcn_apply(self.ops, x)


class SgcKernel(BaseKernel):
    """Ã_n^k; k defaults to cfg.k_order"""

    name = "sgc"

    def __init__(self, ops: NormalizedOps, cfg: Optional[DenoiseConfig] = None,
                 k: Optional[int] = None, **kwargs):
        super().__init__(ops, cfg, **kwargs)
        self.k = self.cfg.k_order if k is None else k
        if self.k < 1:
            raise ValueError(f"sgc needs k >= 1, got {self.k}")

    def apply(self, x) -> np.ndarray:
        return sgc_apply(self.ops, self.k, x)


class NoRenormKernel(BaseKernel):
    """I + A_n, the first-order kernel without the renormalization trick"""

    name = "i-plus-an"

    def apply(self, x) -> np.ndarray:
        return no_renorm_apply(self.ops, x)
