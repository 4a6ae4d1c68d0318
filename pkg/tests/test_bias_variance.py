import math

import numpy as np
import pytest

from graph_denoise_core.analysis import default_signal, mc_bias_variance, prop3_monotonicity_check
from graph_denoise_core.exceptions import AlphaRangeError
from graph_denoise_core.graph import normalized_ops, smooth_eigenvector


class TestMonteCarlo:
    def test_p2_variance_matches_closed_form(self, p2_ops):
        sigma = 0.1
        report = mc_bias_variance(p2_ops, [1.0, 0.0], sigma, [0.5], n_samples=20_000, seed=7)
        expected = 10 / 9 * sigma ** 2
        assert report.variance[0] == pytest.approx(expected, rel=1e-10)
        assert report.mc_variance[0] == pytest.approx(expected, rel=0.05)

    def test_mse_decomposes(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(12, rng))
        x_hat = default_signal(ops, bump_node=3)
        report = mc_bias_variance(ops, x_hat, 0.3, [0.3, 0.6, 0.9], n_samples=4000, seed=1)
        # 蒙特卡洛各项之间是恒等式
        np.testing.assert_allclose(report.mse, report.mc_variance + report.mc_bias_sq, rtol=1e-8)
        closed_total = report.variance + report.bias_sq
        assert np.all(np.abs(report.mse - closed_total) <= 4 * report.mse_se + 1e-3 * closed_total)

    def test_deterministic_for_seed(self, p2_ops):
        a = mc_bias_variance(p2_ops, [1.0, 0.0], 0.1, [0.2, 0.7], n_samples=500, seed=3)
        b = mc_bias_variance(p2_ops, [1.0, 0.0], 0.1, [0.2, 0.7], n_samples=500, seed=3)
        np.testing.assert_array_equal(a.mse, b.mse)
        np.testing.assert_array_equal(a.mc_variance, b.mc_variance)

    def test_alpha_above_one_is_mc_only(self, p2_ops):
        report = mc_bias_variance(p2_ops, [1.0, 0.0], 0.1, [0.5, 1.2], k_order=4, n_samples=200)
        np.testing.assert_array_equal(report.mc_only, [False, True])
        assert math.isnan(report.variance[1])
        assert math.isnan(report.bias_sq[1])
        assert np.isfinite(report.mse[1])
        assert len(report.rows()) == 2

    @pytest.mark.parametrize(
        "kwargs, error",
        [
            ({"n_samples": 50}, ValueError),
            ({"sigma": 0.0}, ValueError),
            ({"alpha_grid": []}, ValueError),
            ({"alpha_grid": [0.0, 0.5]}, AlphaRangeError),
        ],
    )
    def test_invalid_arguments(self, p2_ops, kwargs, error):
        params = {"sigma": 0.1, "alpha_grid": [0.5], "n_samples": 200}
        params.update(kwargs)
        with pytest.raises(error):
            mc_bias_variance(p2_ops, [1.0, 0.0], **params)


class TestMonotonicity:
    def test_variance_falls_bias_rises(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(15, rng))
        report = mc_bias_variance(ops, default_signal(ops), 0.2, [0.2, 0.4, 0.6, 0.8], n_samples=200)
        result = prop3_monotonicity_check(report)
        assert result.variance_decreasing
        assert result.bias_increasing
        assert not result.degenerate

    def test_smooth_signal_is_degenerate(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(15, rng))
        report = mc_bias_variance(ops, smooth_eigenvector(ops), 0.2, [0.2, 0.5, 0.8], n_samples=200)
        result = prop3_monotonicity_check(report)
        assert result.degenerate
        assert not result.bias_increasing
        assert result.variance_decreasing

    def test_needs_three_points(self, p2_ops):
        report = mc_bias_variance(p2_ops, [1.0, 0.0], 0.1, [0.3, 0.6], n_samples=200)
        with pytest.raises(ValueError):
            prop3_monotonicity_check(report)

    def test_grid_must_ascend(self, p2_ops):
        report = mc_bias_variance(p2_ops, [1.0, 0.0], 0.1, [0.3, 0.6, 0.5], n_samples=200)
        with pytest.raises(ValueError):
            prop3_monotonicity_check(report)

    def test_alpha_at_or_above_one_rejected(self, p2_ops):
        report = mc_bias_variance(p2_ops, [1.0, 0.0], 0.1, [0.3, 0.6, 1.1], k_order=4, n_samples=200)
        with pytest.raises(AlphaRangeError):
            prop3_monotonicity_check(report)


class TestDefaultSignal:
    def test_smooth_plus_bump(self, connected_graph, rng):
        ops = normalized_ops(connected_graph(9, rng))
        v = default_signal(ops, bump_node=4, bump=2.0)
        expected = smooth_eigenvector(ops) * 3.0
        expected[4] += 2.0
        np.testing.assert_allclose(v, expected)

    def test_bump_node_range(self, p2_ops):
        with pytest.raises(ValueError):
            default_signal(p2_ops, bump_node=2)
