from dataclasses import replace
from typing import Optional

import numpy as np

from ...models.config import DenoiseConfig
from ...models.graph import Graph, NormalizedOps
from ..base import BaseKernel
from ..edge_denoise import DENSE_EDGE_CAP, gsdnef_denoise_adjacency
from ..polynomial import gsdnef_apply, gsdnf_apply


class GsdnfKernel(BaseKernel):
    """GSDN-F: truncated Neumann series of αA_n"""

    name = "gsdn-f"

    def apply(self, x) -> np.ndarray:
        return gsdnf_apply(self.ops, self.cfg, x)


class GsdnefKernel(BaseKernel):
    """GSDN-EF: GSDN-F over the edge-denoised Â_n

    Â is built once, at construction, from the features passed in and then
    reused for every call to apply.
    """

    name = "gsdn-ef"
    sparse_edge_mask = False

    def __init__(
        self,
        ops: NormalizedOps,
        cfg: Optional[DenoiseConfig] = None,
        graph: Optional[Graph] = None,
        features=None,
        dense_cap: int = DENSE_EDGE_CAP,
        **kwargs,
    ):
        super().__init__(ops, cfg, **kwargs)
        if graph is None or features is None:
            raise ValueError(f"kernel {self.name!r} requires both graph and features")
        if self.cfg.sparse_edge_mask != self.sparse_edge_mask:
            self.cfg = replace(self.cfg, sparse_edge_mask=self.sparse_edge_mask)
        self.denoised_graph, self.denoised_ops = gsdnef_denoise_adjacency(
            graph, ops, features, self.cfg, dense_cap=dense_cap
        )

    def apply(self, x) -> np.ndarray:
        return gsdnef_apply(self.denoised_ops, self.cfg, x)


class GsdnefSparseKernel(GsdnefKernel):
    """GSDN-EF restricted to the original edges"""

    name = "gsdn-ef-sparse"
    sparse_edge_mask = True
