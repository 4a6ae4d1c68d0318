import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from graph_denoise_core.datasets import gen_sbm
from graph_denoise_core.graph import build_graph, normalized_ops, path_graph
from graph_denoise_core.models import FeatureNorm, SbmSpec

settings.register_profile(
    "fast",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("fast")


@pytest.fixture
def p2():
    return path_graph(2)


@pytest.fixture
def p2_ops(p2):
    return normalized_ops(p2)


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def cycle12():
    return build_graph(12, [(i, (i + 1) % 12) for i in range(12)])


@pytest.fixture
def small_sbm():
    """两个社区、60 个节点，连通且划分为 12/16/32"""
    spec = SbmSpec(
        n_nodes=60, n_communities=2, p_in=0.3, p_out=0.02,
        feature_dim=4, topic_size=1, feature_norm=FeatureNorm.NONE, require_connected=True, seed=3,
    )
    return gen_sbm(spec)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_connected_graph(n: int, rng: np.random.Generator, p: float = 0.3):
    """路径骨架加随机边，保证连通"""
    edges = [(i, i + 1) for i in range(n - 1)]
    for i in range(n):
        for j in range(i + 2, n):
            if rng.random() < p:
                edges.append((i, j))
    return build_graph(n, edges)


@pytest.fixture
def connected_graph():
    return random_connected_graph
