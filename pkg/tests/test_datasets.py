import json

import numpy as np
import pytest

from graph_denoise_core.datasets import (
    MANIFEST_NAME,
    community_labels,
    default_split_sizes,
    gen_sbm,
    load_citation_raw,
    load_truth_features,
    make_split,
    planted_features,
    read_dataset_manifest,
    smoothness_permutation_test,
    write_sbm_files,
)
from graph_denoise_core.exceptions import (
    DatasetFormatError,
    DisconnectedGraphError,
    ManifestError,
    SplitError,
)
from graph_denoise_core.graph import normalized_ops
from graph_denoise_core.models import FeatureNorm, SbmSpec
from graph_denoise_core.utils import calculate_file_hash


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestSbm:
    def test_community_sizes_spread_remainder(self):
        np.testing.assert_array_equal(np.bincount(community_labels(10, 3)), [4, 3, 3])

    def test_zero_cross_probability_gives_block_diagonal_graph(self):
        sbm = gen_sbm(SbmSpec(n_nodes=40, p_in=0.5, p_out=0.0, seed=1))
        labels = sbm.dataset.labels
        g = sbm.dataset.graph
        assert g.num_edges > 0
        np.testing.assert_array_equal(labels[g.src], labels[g.dst])
        assert np.all(g.degrees() > 0)

    def test_disconnected_blocks_give_up_when_connectivity_required(self):
        # p_out = 0 时每次采样都有两个连通分量
        spec = SbmSpec(n_nodes=40, p_in=0.5, p_out=0.0, require_connected=True, seed=1)
        with pytest.raises(DisconnectedGraphError):
            gen_sbm(spec)

    def test_default_features_are_l1_topic_rows(self):
        sbm = gen_sbm(SbmSpec(n_nodes=100, seed=5))
        truth = sbm.ground_truth
        assert truth.shape == (100, 1000)
        np.testing.assert_allclose(truth.sum(axis=1), 1.0)
        np.testing.assert_allclose(np.linalg.norm(truth, axis=1), 1.0 / np.sqrt(40))
        assert np.all(np.count_nonzero(truth, axis=1) == 40)
        labels = sbm.dataset.labels
        a, b = np.flatnonzero(labels == 0)[0], np.flatnonzero(labels == 1)[0]
        assert truth[a] @ truth[b] == 0.0

    def test_planted_features_scale_and_norm(self):
        spec = SbmSpec(n_nodes=6, p_in=1.0, p_out=0.5, feature_dim=8, topic_size=2,
                       feature_norm=FeatureNorm.L2, community_mean_scale=3.0)
        truth = planted_features(spec, community_labels(6, 2))
        np.testing.assert_allclose(np.linalg.norm(truth, axis=1), 3.0)
        np.testing.assert_allclose(truth[0, :2], 3.0 / np.sqrt(2))
        np.testing.assert_array_equal(truth[0, 2:], 0.0)

    def test_topic_width_must_fit(self):
        with pytest.raises(ValueError):
            SbmSpec(feature_dim=50, topic_size=40)

    def test_edges_respect_blocks(self):
        sbm = gen_sbm(SbmSpec(n_nodes=80, p_in=0.3, p_out=0.005, seed=2))
        labels = sbm.dataset.labels
        g = sbm.dataset.graph
        cross = np.count_nonzero(labels[g.src] != labels[g.dst])
        assert cross < 0.1 * g.num_edges

    def test_noise_free_features_equal_truth(self, small_sbm):
        np.testing.assert_array_equal(small_sbm.dataset.features, small_sbm.ground_truth)
        expected = np.zeros((60, 4))
        expected[np.arange(60), small_sbm.dataset.labels] = 1.0
        np.testing.assert_array_equal(small_sbm.ground_truth, expected)

    def test_noisy_features(self):
        sbm = gen_sbm(SbmSpec(n_nodes=100, feature_noise_sigma=0.5, seed=4))
        residual = sbm.dataset.features - sbm.ground_truth
        assert residual.std() == pytest.approx(0.5, rel=0.1)

    def test_deterministic(self):
        spec = SbmSpec(n_nodes=100, seed=11)
        assert gen_sbm(spec).dataset.graph == gen_sbm(spec).dataset.graph

    def test_planted_features_are_smooth(self, small_sbm):
        ops = normalized_ops(small_sbm.dataset.graph)
        assert smoothness_permutation_test(ops, small_sbm.ground_truth, n_permutations=200) > 0.95

    def test_split_sizes(self, small_sbm):
        ds = small_sbm.dataset
        assert (ds.train_idx.size, ds.val_idx.size, ds.test_idx.size) == (12, 16, 32)
        np.testing.assert_array_equal(np.bincount(ds.labels[ds.train_idx]), [6, 6])


class TestSplit:
    def test_default_sizes_for_large_classes(self):
        sbm = gen_sbm(SbmSpec(n_nodes=300, n_communities=3, p_in=0.2, seed=0))
        assert default_split_sizes(sbm.dataset) == (60, 80, 160)

    def test_disjoint_and_deterministic(self, small_sbm):
        a = make_split(small_sbm.dataset, (10, 20, 30), seed=8)
        b = make_split(small_sbm.dataset, (10, 20, 30), seed=8)
        np.testing.assert_array_equal(a.test_idx, b.test_idx)
        union = np.concatenate([a.train_idx, a.val_idx, a.test_idx])
        assert np.unique(union).size == 60

    @pytest.mark.parametrize("sizes", [(11, 10, 10), (40, 20, 10), (-2, 10, 10)])
    def test_invalid_sizes(self, small_sbm, sizes):
        with pytest.raises(SplitError):
            make_split(small_sbm.dataset, sizes)

    def test_unbalanced_split(self, small_sbm):
        ds = make_split(small_sbm.dataset, (7, 3, 5), per_class_train=False, seed=1)
        assert ds.train_idx.size == 7


class TestCitation:
    def test_toy_path_graph(self, tmp_path):
        content = _write(tmp_path / "toy.content", "p1 1 0 B\np0 0 1 A\n")
        cites = _write(tmp_path / "toy.cites", "p0 p1\np1 p0\n")
        ds = load_citation_raw(content, cites)
        assert ds.graph.edges == [(0, 1, 1.0)]
        np.testing.assert_array_equal(ds.labels, [1, 0])
        assert ds.metadata["label_names"] == ["A", "B"]
        assert ds.metadata["node_ids"] == ["p1", "p0"]
        assert ds.metadata["duplicate_citations"] == 1

    def test_dangling_and_self_citations_dropped(self, tmp_path):
        content = _write(tmp_path / "d.content", "a 1 x\nb 2 y\nc 3 x\n")
        cites = _write(tmp_path / "d.cites", "a b\nb zzz\nc c\nb c\n")
        ds = load_citation_raw(content, cites)
        assert ds.graph.num_edges == 2
        assert ds.metadata["dangling_citations"] == 1
        assert ds.metadata["self_citations"] == 1

    @pytest.mark.parametrize(
        "content, line",
        [
            ("a 1 0 x\nb 1 y\n", 2),
            ("a 1 0 x\nb 1 q y\n", 2),
            ("a 1 x\nb 1 y\na 0 x\n", 3),
            ("a x\n", 1),
        ],
    )
    def test_malformed_content_reports_line(self, tmp_path, content, line):
        content_path = _write(tmp_path / "m.content", content)
        cites = _write(tmp_path / "m.cites", "a b\n")
        with pytest.raises(DatasetFormatError) as err:
            load_citation_raw(content_path, cites)
        assert err.value.line == line

    def test_malformed_cites_reports_line(self, tmp_path):
        content = _write(tmp_path / "c.content", "a 1 x\nb 2 y\n")
        cites = _write(tmp_path / "c.cites", "a b\na b c\n")
        with pytest.raises(DatasetFormatError) as err:
            load_citation_raw(content, cites)
        assert err.value.line == 2

    def test_empty_cites(self, tmp_path):
        content = _write(tmp_path / "e.content", "a 1 x\n")
        cites = _write(tmp_path / "e.cites", "\n")
        with pytest.raises(DatasetFormatError):
            load_citation_raw(content, cites)


class TestSbmFiles:
    def test_written_files_load_back(self, small_sbm, tmp_path):
        paths = write_sbm_files(small_sbm, tmp_path, "toy")
        ds = load_citation_raw(paths["content"], paths["cites"])
        assert ds.graph == small_sbm.dataset.graph
        np.testing.assert_array_equal(ds.labels, small_sbm.dataset.labels)
        np.testing.assert_array_equal(ds.features, small_sbm.dataset.features)
        np.testing.assert_array_equal(load_truth_features(paths["truth"], ds), small_sbm.ground_truth)

    def test_manifest_checksums(self, small_sbm, tmp_path):
        paths = write_sbm_files(small_sbm, tmp_path, "toy")
        manifest = read_dataset_manifest(tmp_path)
        assert manifest["num_nodes"] == 60
        assert manifest["metadata"]["spec"]["seed"] == 3
        for kind in ("content", "cites", "truth"):
            assert manifest["files"][kind]["sha256"] == calculate_file_hash(paths[kind])

    def test_same_seed_same_bytes(self, tmp_path):
        spec = SbmSpec(n_nodes=50, p_in=0.3, seed=7)
        a = write_sbm_files(gen_sbm(spec), tmp_path / "a")
        b = write_sbm_files(gen_sbm(spec), tmp_path / "b")
        for kind in ("content", "cites", "truth"):
            assert calculate_file_hash(a[kind]) == calculate_file_hash(b[kind])

    def test_invalid_manifest(self, small_sbm, tmp_path):
        write_sbm_files(small_sbm, tmp_path, "toy")
        manifest_path = tmp_path / MANIFEST_NAME
        payload = json.loads(manifest_path.read_text(encoding="utf-8"))
        payload["files"]["content"]["sha256"] = "not-a-hash"
        manifest_path.write_text(json.dumps(payload), encoding="utf-8")
        with pytest.raises(ManifestError):
            read_dataset_manifest(tmp_path)
