from dataclasses import replace

import numpy as np
import pytest

from graph_denoise_core.classify import (
    accuracy,
    asweep,
    build_model,
    evaluate,
    gradient_check,
    micro_f1,
    sweep,
    sweep_trend,
    train,
)
from graph_denoise_core.datasets import gen_sbm
from graph_denoise_core.denoise import inject_edge_noise, inject_feature_noise
from graph_denoise_core.exceptions import SplitError, UndefinedCorrelationError
from graph_denoise_core.graph import path_graph
from graph_denoise_core.models import (
    DenoiseConfig,
    FeatureNorm,
    LabeledDataset,
    NoiseSpec,
    Optimizer,
    SbmSpec,
    SweepRow,
    TrainConfig,
)


def _tiny_dataset() -> LabeledDataset:
    """4 个节点，每个节点一个独热特征，训练集每类一个节点"""
    return LabeledDataset(
        graph=path_graph(4),
        features=np.eye(4),
        labels=np.array([0, 1, 0, 1]),
        train_idx=np.array([0, 1]),
        val_idx=np.array([2]),
        test_idx=np.array([3]),
    )


class TestMetrics:
    def test_accuracy(self):
        assert accuracy([0, 1, 1], [0, 1, 0]) == pytest.approx(2 / 3)

    def test_single_label_micro_f1_is_accuracy(self):
        assert micro_f1([0, 1, 2, 2], [0, 2, 2, 2]) == accuracy([0, 1, 2, 2], [0, 2, 2, 2])

    def test_multilabel_micro_f1(self):
        truth = [[1, 0], [1, 1]]
        pred = [[1, 1], [0, 1]]
        assert micro_f1(truth, pred) == pytest.approx(2 / 3)

    def test_empty_and_mismatch(self):
        with pytest.raises(ValueError):
            accuracy([], [])
        with pytest.raises(ValueError):
            micro_f1([0, 1], [0])


class TestTraining:
    def test_separable_identity_fits_training_set(self):
        ds = _tiny_dataset()
        cfg = TrainConfig(kernel="identity", layers=1, epochs=200, learning_rate=0.1,
                          optimizer=Optimizer.ADAM)
        params, history = train(ds, cfg)
        assert history.final.train_acc == 1.0
        assert len(history.epochs) == 200
        acc, f1 = evaluate(ds, params, cfg, "train")
        assert acc == 1.0
        assert f1 == acc

    def test_default_gradient_descent_lowers_loss(self):
        cfg = TrainConfig(kernel="identity", layers=1)
        assert cfg.optimizer is Optimizer.GD
        assert (cfg.learning_rate, cfg.epochs) == (0.02, 200)
        _, history = train(_tiny_dataset(), cfg)
        losses = [e.train_loss for e in history.epochs]
        assert losses[-1] < losses[0]
        assert all(b <= a + 1e-12 for a, b in zip(losses, losses[1:]))

    def test_deterministic_for_seed(self, small_sbm):
        cfg = TrainConfig(kernel="gsdn-f", epochs=20, seed=5)
        a, _ = train(small_sbm.dataset, cfg)
        b, _ = train(small_sbm.dataset, cfg)
        np.testing.assert_array_equal(a.w1, b.w1)
        np.testing.assert_array_equal(a.w2, b.w2)

    def test_weight_decay_shrinks_weights(self, small_sbm):
        cfg = TrainConfig(kernel="identity", layers=1, epochs=100, learning_rate=0.1,
                          optimizer=Optimizer.GD, l2_weight=1.0)
        _, decayed = train(small_sbm.dataset, cfg)
        _, free = train(small_sbm.dataset, replace(cfg, l2_weight=0.0))
        assert decayed.weight_norms[-1] < decayed.weight_norms[0]
        assert decayed.weight_norms[-1] < free.weight_norms[-1]

    def test_beta_selected_by_validation(self, small_sbm):
        cfg = TrainConfig(kernel="gsdn-ef", layers=1, epochs=30, beta_grid=(0.0, 0.5))
        params, history = train(small_sbm.dataset, cfg)
        scores = history.beta_scores
        assert set(scores) == {0.0, 0.5}
        best = max(scores.values())
        assert params.beta == next(b for b in cfg.beta_grid if scores[b] == best)

    def test_requires_split(self, small_sbm):
        ds = small_sbm.dataset
        bare = LabeledDataset(graph=ds.graph, features=ds.features, labels=ds.labels)
        with pytest.raises(SplitError):
            train(bare, TrainConfig(epochs=1))

    def test_unknown_mask(self, small_sbm):
        cfg = TrainConfig(kernel="identity", layers=1, epochs=1)
        params, _ = train(small_sbm.dataset, cfg)
        with pytest.raises(ValueError):
            evaluate(small_sbm.dataset, params, cfg, "holdout")

    def test_propagation_beats_identity_on_noisy_features(self):
        # 单位指示特征加强噪声，Adam 训练
        gaps = []
        for seed in range(5):
            sbm = gen_sbm(SbmSpec(n_nodes=200, p_in=0.2, p_out=0.01, feature_dim=16, topic_size=1,
                                  feature_norm=FeatureNorm.NONE, feature_noise_sigma=2.0,
                                  require_connected=True, seed=seed))
            scores = {}
            for kernel in ("identity", "gsdn-f"):
                cfg = TrainConfig(kernel=kernel, seed=seed, optimizer=Optimizer.ADAM)
                params, _ = train(sbm.dataset, cfg)
                scores[kernel], _ = evaluate(sbm.dataset, params, cfg, "test")
            gaps.append(scores["gsdn-f"] - scores["identity"])
        assert np.mean(gaps) >= 0.10


class TestGradientCheck:
    @pytest.mark.parametrize("layers, tolerance", [(1, 1e-6), (2, 1e-5)])
    def test_analytic_gradients(self, small_sbm, layers, tolerance):
        cfg = TrainConfig(kernel="gsdn-f", layers=layers, epochs=1)
        model = build_model(small_sbm.dataset, cfg)
        params = model.init_params(np.random.default_rng(0))
        assert gradient_check(small_sbm.dataset, cfg, params, n_samples=20) < tolerance

    def test_cheby_basis_gradients(self, small_sbm):
        cfg = TrainConfig(kernel="cheby", layers=2, epochs=1)
        model = build_model(small_sbm.dataset, cfg)
        params = model.init_params(np.random.default_rng(1))
        assert gradient_check(small_sbm.dataset, cfg, params) < 1e-5

    def test_needs_ten_samples(self, small_sbm):
        cfg = TrainConfig(layers=1, epochs=1)
        params = build_model(small_sbm.dataset, cfg).init_params(np.random.default_rng(0))
        with pytest.raises(ValueError):
            gradient_check(small_sbm.dataset, cfg, params, n_samples=5)


class TestSweep:
    def test_k_order_rows(self, small_sbm):
        cfg = TrainConfig(kernel="gsdn-f", layers=1, epochs=10)
        rows = sweep(small_sbm.dataset, cfg, "k_order", [1, 2, 4, 8])
        assert [r.value for r in rows] == [1.0, 2.0, 4.0, 8.0]
        assert all(len(r.accuracies) == 3 for r in rows)
        for r in rows:
            assert r.mean_accuracy == pytest.approx(np.mean(r.accuracies))

    async def test_async_sweep_matches_sequential(self, small_sbm):
        cfg = TrainConfig(kernel="gsdn-f", layers=1, epochs=10)
        expected = sweep(small_sbm.dataset, cfg, "alpha", [0.3, 0.9])
        got = await asweep(small_sbm.dataset, cfg, "alpha", [0.3, 0.9], max_concurrency=3)
        assert got == expected

    @pytest.mark.parametrize(
        "param, grid, seeds",
        [
            ("beta", [0.1, 0.2], (0, 1, 2)),
            ("alpha", [0.5], (0, 1, 2)),
            ("alpha", [0.3, 0.5], (0, 1)),
        ],
    )
    def test_invalid_sweeps(self, small_sbm, param, grid, seeds):
        with pytest.raises(ValueError):
            sweep(small_sbm.dataset, TrainConfig(epochs=1), param, grid, seeds)

    def test_trend(self):
        rows = [SweepRow(v, m, 0.0, (m,)) for v, m in [(1, 0.5), (2, 0.6), (4, 0.7)]]
        assert sweep_trend(rows).rho == pytest.approx(1.0)

    def test_constant_trend_undefined(self):
        rows = [SweepRow(v, 0.5, 0.0, (0.5,)) for v in (1, 2, 4)]
        with pytest.raises(UndefinedCorrelationError):
            sweep_trend(rows)


def _indicator_sbm(seed: int, sigma: float = 0.0) -> LabeledDataset:
    spec = SbmSpec(n_nodes=200, p_in=0.2, p_out=0.01, feature_dim=16, topic_size=1,
                   feature_norm=FeatureNorm.NONE, feature_noise_sigma=sigma, seed=seed)
    return gen_sbm(spec).dataset


def _test_accuracy(ds: LabeledDataset, kernel: str, seed: int, denoise: DenoiseConfig) -> float:
    cfg = TrainConfig(kernel=kernel, seed=seed, optimizer=Optimizer.ADAM, denoise=denoise)
    params, _ = train(ds, cfg)
    acc, _ = evaluate(ds, params, cfg, "test")
    return acc


class TestNoiseRobustness:
    """10 个种子的平均测试准确率，排序允许 MARGIN 的误差"""

    MARGIN = 0.03

    def test_edge_denoising_under_edge_noise(self):
        ef, f = [], []
        for seed in range(10):
            ds = _indicator_sbm(seed)
            noisy = replace(ds, graph=inject_edge_noise(ds.graph, NoiseSpec(edge_ratio=0.2, seed=seed)))
            ef.append(_test_accuracy(noisy, "gsdn-ef", seed, DenoiseConfig(alpha=0.6, k_order=4)))
            f.append(_test_accuracy(noisy, "gsdn-f", seed, DenoiseConfig(alpha=0.6, k_order=4)))
        assert np.mean(ef) >= np.mean(f) - self.MARGIN

    def test_gsdnf_under_feature_noise(self):
        f, sgc2 = [], []
        for seed in range(10):
            ds = _indicator_sbm(seed)
            noisy = replace(ds, features=inject_feature_noise(ds.features, NoiseSpec(sigma=0.01, seed=seed)))
            f.append(_test_accuracy(noisy, "gsdn-f", seed, DenoiseConfig(alpha=0.6, k_order=4)))
            sgc2.append(_test_accuracy(noisy, "sgc", seed, DenoiseConfig(k_order=2)))
        assert np.mean(f) >= np.mean(sgc2) - self.MARGIN


class TestSensitivityTrends:
    BASE = TrainConfig(kernel="gsdn-f", optimizer=Optimizer.ADAM)

    def test_k_order_rises_then_plateaus(self):
        ds = _indicator_sbm(0, sigma=1.0)
        rows = sweep(ds, self.BASE, "k_order", [0, 1, 4, 8])
        means = [r.mean_accuracy for r in rows]
        assert means[0] == min(means)
        assert sweep_trend(rows).rho > 0
        assert abs(means[3] - means[2]) <= 0.04

    def test_alpha_rises_away_from_identity(self):
        ds = _indicator_sbm(0, sigma=1.0)
        rows = sweep(ds, self.BASE, "alpha", [0.05, 0.3, 0.6, 0.9])
        means = [r.mean_accuracy for r in rows]
        assert sweep_trend(rows).rho > 0
        assert int(np.argmax(means)) > 0
        assert means[2] > means[0]
