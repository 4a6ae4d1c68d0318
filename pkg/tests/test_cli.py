import json

import pytest

from graph_denoise_core import __version__
from graph_denoise_core.cli import RUN_MANIFEST_NAME, main
from graph_denoise_core.utils import calculate_file_hash, read_csv

SMALL_SBM = "n=60,p_in=0.3,p_out=0.02,f=4,topic=1,norm=none,connected=1,seed=3"
NOISY_SBM = "n=100,seed=3"


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for key in ("GSD_OUTPUT_DIR", "GSD_LOG_LEVEL", "GSD_CONFIG", "GSD_DENSE_CAP"):
        monkeypatch.delenv(key, raising=False)


def _manifest(out_dir):
    return json.loads((out_dir / RUN_MANIFEST_NAME).read_text(encoding="utf-8"))


class TestDenoiseCommand:
    def test_writes_reports_and_manifest(self, tmp_path):
        out = tmp_path / "denoise"
        code = main(["denoise", "--sbm", NOISY_SBM, "--kernel", "gsdn-f,gcn",
                     "--sigma", "0.01", "--seeds", "0,1", "--out", str(out)])
        assert code == 0

        rows = read_csv(out / "summary.csv")
        assert len(rows) == 4
        for row in rows:
            assert float(row["mean_noise"]) < float(row["mean_noise_before"])

        per_node = read_csv(out / "denoise" / "gsdn-f_sigma0.01_seed0.csv")
        assert len(per_node) == 100

        manifest = _manifest(out)
        assert manifest["status"] == "ok"
        assert manifest["version"] == __version__
        assert manifest["seeds"] == [0, 1]
        assert "summary.csv" in manifest["outputs"]
        assert "denoise/gsdn-f_sigma0.01_seed0.csv" in manifest["outputs"]
        assert manifest["config"]["settings"]["denoise"]["alpha"] == 0.6

    def test_unknown_kernel_exit_code(self, tmp_path, capsys):
        out = tmp_path / "bad"
        assert main(["denoise", "--sbm", SMALL_SBM, "--kernel", "nope", "--out", str(out)]) == 2
        manifest = _manifest(out)
        assert manifest["status"] == "error"
        assert manifest["error"]["type"] == "UnknownKernelError"
        assert "UnknownKernelError" in capsys.readouterr().err

    def test_bad_sbm_argument(self, tmp_path):
        with pytest.raises(SystemExit) as err:
            main(["denoise", "--sbm", "nodes=5", "--out", str(tmp_path)])
        assert err.value.code == 2

    def test_replay_reproduces_outputs(self, tmp_path):
        first = tmp_path / "first"
        assert main(["denoise", "--sbm", NOISY_SBM, "--sigma", "0.01", "--out", str(first)]) == 0
        second = tmp_path / "second"
        assert main(["replay", str(first / RUN_MANIFEST_NAME), "--out", str(second)]) == 0
        assert (first / "summary.csv").read_bytes() == (second / "summary.csv").read_bytes()

    def test_replay_ignores_later_config_changes(self, tmp_path, monkeypatch):
        recorded_cfg = tmp_path / "recorded.yaml"
        recorded_cfg.write_text("denoise:\n  alpha: 0.3\n", encoding="utf-8")
        monkeypatch.setenv("GSD_CONFIG", str(recorded_cfg))
        first = tmp_path / "first"
        assert main(["denoise", "--sbm", NOISY_SBM, "--seeds", "0,1", "--out", str(first)]) == 0
        assert _manifest(first)["config"]["environment"]["GSD_CONFIG"] == str(recorded_cfg)

        later_cfg = tmp_path / "later.yaml"
        later_cfg.write_text("denoise:\n  alpha: 0.9\n", encoding="utf-8")
        monkeypatch.setenv("GSD_CONFIG", str(later_cfg))
        recorded_cfg.unlink()
        second = tmp_path / "second"
        assert main(["replay", str(first / RUN_MANIFEST_NAME), "--out", str(second)]) == 0
        assert (first / "summary.csv").read_bytes() == (second / "summary.csv").read_bytes()
        assert _manifest(second)["config"]["settings"]["denoise"]["alpha"] == 0.3

        fresh = tmp_path / "fresh"
        assert main(["denoise", "--sbm", NOISY_SBM, "--seeds", "0,1", "--out", str(fresh)]) == 0
        assert (fresh / "summary.csv").read_bytes() != (first / "summary.csv").read_bytes()

    def test_replay_missing_manifest(self, tmp_path):
        assert main(["replay", str(tmp_path / "missing.json")]) == 2


class TestBiasVarianceCommand:
    def test_path_graph_edge_list(self, tmp_path):
        edges = tmp_path / "p2.edges"
        edges.write_text("# n=2\n0 1\n", encoding="utf-8")
        out = tmp_path / "bv"
        code = main(["bias-variance", "--edge-list", str(edges), "--alpha-grid", "0.25,0.5,0.75",
                     "--samples", "200", "--out", str(out)])
        assert code == 0
        rows = {float(r["alpha"]): r for r in read_csv(out / "bias_variance.csv")}
        assert float(rows[0.5]["var_closed"]) == pytest.approx(10 / 9 * 0.01, rel=1e-9)
        summary = json.loads((out / "summary.json").read_text(encoding="utf-8"))
        assert summary["monotonicity"]["variance_decreasing"] is True
        assert summary["num_nodes"] == 2

    def test_isolated_node_rejected(self, tmp_path):
        edges = tmp_path / "iso.edges"
        edges.write_text("# n=3\n0 1\n", encoding="utf-8")
        out = tmp_path / "iso"
        assert main(["bias-variance", "--edge-list", str(edges), "--out", str(out)]) == 2
        assert _manifest(out)["error"]["type"] == "IsolatedNodeError"


class TestSweepCommand:
    def test_k_grid(self, tmp_path):
        out = tmp_path / "sweep"
        code = main(["sweep", "--sbm", SMALL_SBM, "--grid-k", "1,2,4,8", "--epochs", "5",
                     "--layers", "1", "--max-concurrency", "1", "--out", str(out)])
        assert code == 0
        rows = read_csv(out / "sweep.csv")
        assert [int(float(r["k_order"])) for r in rows] == [1, 2, 4, 8]
        assert all(len(r["accuracies"].split(";")) == 3 for r in rows)
        trend = json.loads((out / "sweep_trend.json").read_text(encoding="utf-8"))
        assert trend["param"] == "k_order"


class TestDatasetCommands:
    def test_gen_sbm_is_reproducible(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        for out in (a, b):
            assert main(["gen-sbm", "--sbm", SMALL_SBM, "--seed", "7", "--out", str(out)]) == 0
        for name in ("sbm.content", "sbm.cites", "sbm.truth"):
            assert calculate_file_hash(a / name) == calculate_file_hash(b / name)
        assert _manifest(a)["seeds"] == [7]
        assert "manifest.json" in _manifest(a)["outputs"]

    def test_classify_on_generated_dataset(self, tmp_path):
        data = tmp_path / "data"
        assert main(["gen-sbm", "--sbm", SMALL_SBM, "--out", str(data)]) == 0
        out = tmp_path / "classify"
        code = main(["classify", "--dataset", str(data), "--epochs", "5", "--layers", "1",
                     "--sigma", "0.0,0.1", "--out", str(out)])
        assert code == 0
        results = read_csv(out / "results.csv")
        assert [float(r["sigma"]) for r in results] == [0.0, 0.1]
        assert all(0.0 <= float(r["test_accuracy"]) <= 1.0 for r in results)
        summary = read_csv(out / "summary.csv")
        assert len(summary) == 2

    def test_tampered_dataset_rejected(self, tmp_path):
        data = tmp_path / "data"
        assert main(["gen-sbm", "--sbm", SMALL_SBM, "--out", str(data)]) == 0
        with open(data / "sbm.cites", "a", encoding="utf-8") as f:
            f.write("0\t59\n")
        out = tmp_path / "classify"
        assert main(["classify", "--dataset", str(data), "--epochs", "1", "--out", str(out)]) == 2
        assert _manifest(out)["error"]["type"] == "ManifestError"
