"""
命令行入口 - 去噪、分类、偏差-方差、参数扫描与 SBM 生成实验

每次运行在输出目录写出 CSV/JSON 结果和一份 run_manifest.json，
replay 子命令可根据清单中记录的参数重新执行。

Usage:
  graph-denoise denoise --sbm n=200,seed=3 --kernel gsdn-f,gcn --sigma 0.005,0.01 --seeds 0,1,2
  graph-denoise classify --dataset data/cora --kernel gsdn-ef --edge-ratio 0.2 --seeds 0,1,2
  graph-denoise bias-variance --edge-list p2.edges --sigma 0.1
  graph-denoise sweep --sbm n=120 --grid-k 1,2,4,8
  graph-denoise gen-sbm --seed 7 --out data/sbm7
  graph-denoise replay runs/denoise/run_manifest.json --out runs/replayed
"""

import argparse
import asyncio
import itertools
import json
import sys
import time
from dataclasses import replace
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from . import __version__
from .analysis import default_signal, mc_bias_variance, prop3_monotonicity_check
from .classify import asweep, evaluate, sweep, sweep_trend, train
from .config import ToolkitConfig
from .datasets import (
    MANIFEST_NAME,
    default_split_sizes,
    gen_sbm,
    load_citation_raw,
    load_truth_features,
    make_split,
    read_dataset_manifest,
    write_sbm_files,
)
from .denoise import denoise_report, inject_feature_noise, normalize_features, perturb_edges
from .exceptions import (
    AlphaRangeError,
    DatasetFormatError,
    GraphDenoiseError,
    ManifestError,
    UndefinedCorrelationError,
    UnknownKernelError,
)
from .filters import KernelFactory
from .graph import normalized_ops, read_edge_list
from .models import DenoiseConfig, FeatureNorm, LabeledDataset, NoiseSpec, RunManifest, SbmSpec, TrainConfig
from .utils import (
    RUN_MANIFEST_SCHEMA,
    atomic_write_json,
    calculate_file_hash,
    read_json,
    setup_logging,
    validate_payload,
    write_csv,
)
from .utils.config_utils import read_config

RUN_MANIFEST_NAME = "run_manifest.json"

# --sbm 中允许的简写
SBM_KEYS = {
    "n": "n_nodes",
    "n_nodes": "n_nodes",
    "k": "n_communities",
    "communities": "n_communities",
    "n_communities": "n_communities",
    "p_in": "p_in",
    "p_out": "p_out",
    "f": "feature_dim",
    "features": "feature_dim",
    "feature_dim": "feature_dim",
    "topic": "topic_size",
    "topic_size": "topic_size",
    "norm": "feature_norm",
    "feature_norm": "feature_norm",
    "connected": "require_connected",
    "require_connected": "require_connected",
    "scale": "community_mean_scale",
    "community_mean_scale": "community_mean_scale",
    "sigma": "feature_noise_sigma",
    "feature_noise_sigma": "feature_noise_sigma",
    "seed": "seed",
}
SBM_INT_FIELDS = ("n_nodes", "n_communities", "feature_dim", "topic_size", "seed")
SBM_TEXT_FIELDS = ("feature_norm",)
SBM_BOOL_FIELDS = ("require_connected",)


class RunOutputs(NamedTuple):
    files: List[Path]
    seeds: List[int]


# ---------------------------------------------------------------------------
# 参数解析
# ---------------------------------------------------------------------------


def _float_list(text: str) -> List[float]:
    try:
        values = [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _int_list(text: str) -> List[int]:
    try:
        values = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _str_list(text: str) -> List[str]:
    values = [t.strip() for t in text.split(",") if t.strip()]
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _sbm_overrides(text: str) -> Dict[str, Any]:
    """解析 "n=200,k=2,p_in=0.1,seed=7" 形式的 SBM 参数"""
    overrides: Dict[str, Any] = {}
    for item in _str_list(text):
        key, sep, value = item.partition("=")
        key = key.strip()
        if not sep or key not in SBM_KEYS:
            raise argparse.ArgumentTypeError(
                f"bad SBM field {item!r}, expected key=value with key in {sorted(SBM_KEYS)}"
            )
        field_name = SBM_KEYS[key]
        try:
            if field_name in SBM_TEXT_FIELDS:
                overrides[field_name] = FeatureNorm(value.strip()).value
            elif field_name in SBM_BOOL_FIELDS:
                overrides[field_name] = {"1": True, "true": True, "0": False, "false": False}[value.strip().lower()]
            else:
                overrides[field_name] = int(value) if field_name in SBM_INT_FIELDS else float(value)
        except (KeyError, ValueError):
            raise argparse.ArgumentTypeError(f"bad value for {key}: {value!r}")
    return overrides


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=None, help="Output directory (default: $GSD_OUTPUT_DIR/<command>)")
    common.add_argument("--config", default=None, help="YAML merged over the packaged defaults")
    common.add_argument("--log-level", default=None, help="Log level (default: $GSD_LOG_LEVEL or INFO)")

    source = argparse.ArgumentParser(add_help=False)
    source_group = source.add_mutually_exclusive_group()
    source_group.add_argument("--dataset", default=None, help="Directory (or .content file) in raw citation format")
    source_group.add_argument("--sbm", type=_sbm_overrides, default=None,
                              help="Synthetic SBM, e.g. n=200,k=2,p_in=0.1,p_out=0.01,seed=0")

    filters = argparse.ArgumentParser(add_help=False)
    filters.add_argument("--alpha", type=float, default=None)
    filters.add_argument("--k", type=int, default=None, help="Polynomial order K")
    filters.add_argument("--sparse-mask", action="store_true", help="Restrict edge denoising to existing edges")
    filters.add_argument("--normalize", choices=("l1", "l2", "none"), default=None)

    training = argparse.ArgumentParser(add_help=False)
    training.add_argument("--epochs", type=int, default=None)
    training.add_argument("--lr", type=float, default=None)
    training.add_argument("--layers", type=int, choices=(1, 2), default=None)
    training.add_argument("--hidden", type=int, default=None)
    training.add_argument("--optimizer", choices=("adam", "gd"), default=None)
    training.add_argument("--beta-grid", type=_float_list, default=None)

    parser = argparse.ArgumentParser(
        prog="graph-denoise",
        description="Graph signal denoising experiments",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=f"Kernels: {', '.join(KernelFactory.get_supported_kernels())}",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", parents=[common, source, filters], help="Denoise noisy node features")
    p.add_argument("--kernel", type=_str_list, default=["gsdn-f"], help="Comma-separated kernel names")
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--sigma", type=_float_list, default=[0.01], help="Comma-separated noise levels")
    p.add_argument("--seeds", type=_int_list, default=[0])
    p.set_defaults(handler=cmd_denoise)

    p = sub.add_parser("classify", parents=[common, source, filters, training],
                       help="Semi-supervised node classification under noise")
    p.add_argument("--kernel", default="gsdn-f")
    p.add_argument("--sigma", "--noise-sigma", dest="sigma", type=_float_list, default=[0.0])
    p.add_argument("--edge-ratio", type=_float_list, default=[0.0])
    p.add_argument("--seeds", type=_int_list, default=[0])
    p.set_defaults(handler=cmd_classify)

    p = sub.add_parser("bias-variance", parents=[common], help="Monte-Carlo bias/variance of GSDN-F over alpha")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--dataset", default=None)
    group.add_argument("--sbm", type=_sbm_overrides, default=None)
    group.add_argument("--edge-list", default=None)
    p.add_argument("--sigma", type=float, default=None)
    p.add_argument("--alpha-grid", type=_float_list, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bump-node", type=int, default=0)
    p.add_argument("--bump", type=float, default=1.0)
    p.set_defaults(handler=cmd_bias_variance)

    p = sub.add_parser("sweep", parents=[common, source, filters, training], help="Accuracy over an alpha or K grid")
    p.add_argument("--kernel", default="gsdn-f")
    grid = p.add_mutually_exclusive_group(required=True)
    grid.add_argument("--grid-alpha", type=_float_list, default=None)
    grid.add_argument("--grid-k", type=_int_list, default=None)
    p.add_argument("--seeds", type=_int_list, default=[0, 1, 2])
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--max-concurrency", type=int, default=None)
    p.set_defaults(handler=cmd_sweep)

    p = sub.add_parser("gen-sbm", parents=[common], help="Write a synthetic SBM dataset")
    p.add_argument("--sbm", type=_sbm_overrides, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--name", default="sbm")
    p.set_defaults(handler=cmd_gen_sbm)

    p = sub.add_parser("replay", help="Re-run a command from its run manifest")
    p.add_argument("manifest")
    p.add_argument("--out", default=None, help="Write into this directory instead of the recorded one")
    return parser


# ---------------------------------------------------------------------------
# 数据与配置
# ---------------------------------------------------------------------------


def _pick(value, default):
    return default if value is None else value


def _sbm_spec(settings: Dict[str, Any], overrides: Optional[Dict[str, Any]], seed: Optional[int] = None) -> SbmSpec:
    fields = {**settings.get("sbm", {}), **(overrides or {})}
    if seed is not None:
        fields["seed"] = seed
    return SbmSpec(**fields)


def _check_manifest_hashes(directory: Path) -> None:
    manifest = read_dataset_manifest(directory)
    for kind, entry in manifest["files"].items():
        path = directory / entry["path"]
        if not path.is_file() or calculate_file_hash(path) != entry["sha256"]:
            raise ManifestError(f"{kind} file {path} does not match its manifest checksum")


def load_dataset_dir(path: Path) -> Tuple[LabeledDataset, Optional[np.ndarray]]:
    """读取 .content/.cites（以及可选的 .truth）

    目录中存在 manifest.json 时先核对校验和。
    """
    if path.is_file():
        content = path
    elif path.is_dir():
        candidates = sorted(path.glob("*.content"))
        if len(candidates) != 1:
            raise DatasetFormatError(f"expected exactly one .content file, found {len(candidates)}", path=str(path))
        content = candidates[0]
    else:
        raise DatasetFormatError("dataset path does not exist", path=str(path))

    cites = content.with_suffix(".cites")
    if not cites.is_file():
        raise DatasetFormatError("missing .cites file", path=str(cites))
    if (content.parent / MANIFEST_NAME).is_file():
        _check_manifest_hashes(content.parent)

    ds = load_citation_raw(content, cites)
    truth_path = content.with_suffix(".truth")
    truth = load_truth_features(truth_path, ds) if truth_path.is_file() else None
    logger.info(f"loaded {content.stem}: N={ds.num_nodes}, |E|={ds.graph.num_edges}, classes={ds.num_classes}")
    return ds, truth


def load_source(args, settings: Dict[str, Any]) -> Tuple[LabeledDataset, Optional[np.ndarray]]:
    """--dataset 或 --sbm，都没有时使用默认 SBM"""
    if getattr(args, "dataset", None):
        return load_dataset_dir(Path(args.dataset))
    sbm = gen_sbm(_sbm_spec(settings, getattr(args, "sbm", None)))
    return sbm.dataset, sbm.ground_truth


def _denoise_config(args, settings: Dict[str, Any], beta: Optional[float] = None) -> DenoiseConfig:
    d = settings["denoise"]
    return DenoiseConfig(
        alpha=_pick(getattr(args, "alpha", None), d["alpha"]),
        k_order=_pick(getattr(args, "k", None), d["k_order"]),
        beta=_pick(beta, d["beta"]),
        sparse_edge_mask=bool(getattr(args, "sparse_mask", False) or d["sparse_edge_mask"]),
        zero_diagonal=d["zero_diagonal"],
    )


def _train_config(args, settings: Dict[str, Any], denoise: DenoiseConfig, seed: int) -> TrainConfig:
    t = settings["train"]
    return TrainConfig(
        learning_rate=_pick(args.lr, t["learning_rate"]),
        l2_weight=t["l2_weight"],
        hidden_units=_pick(args.hidden, t["hidden_units"]),
        layers=_pick(args.layers, t["layers"]),
        epochs=_pick(args.epochs, t["epochs"]),
        kernel=args.kernel,
        denoise=denoise,
        seed=seed,
        beta_grid=tuple(_pick(args.beta_grid, t["beta_grid"])),
        optimizer=_pick(args.optimizer, t["optimizer"]),
        cheby_lambda_max=t.get("cheby_lambda_max", 2.0),
    )


def _check_kernels(names: Sequence[str]) -> None:
    supported = KernelFactory.get_supported_kernels()
    for name in names:
        if name not in supported:
            raise UnknownKernelError(f"Unsupported kernel: {name}. Supported kernels: {supported}")


def _kernel_options(name: str, ds: LabeledDataset, features: np.ndarray, settings: Dict[str, Any]) -> Dict[str, Any]:
    if name.startswith("gsdn-ef"):
        return {"graph": ds.graph, "features": features, "dense_cap": settings["oracle"]["edge_dense_cap"]}
    if name == "cheby":
        return {"lambda_max": settings["train"].get("cheby_lambda_max", 2.0)}
    return {}


def _tag(value: float) -> str:
    return f"{value:g}"


# ---------------------------------------------------------------------------
# 子命令
# ---------------------------------------------------------------------------


def cmd_denoise(args, settings: Dict[str, Any], out_dir: Path, toolkit: ToolkitConfig) -> RunOutputs:
    """对每个 (kernel, σ, seed) 加噪并去噪，输出逐节点距离和汇总

    真实特征取 .truth（SBM 为社区均值），没有时取归一化后的观测特征。
    """
    _check_kernels(args.kernel)
    ds, truth = load_source(args, settings)
    mode = _pick(args.normalize, settings["features"]["normalization"])
    truth = normalize_features(ds.features if truth is None else truth, mode).features
    ops = normalized_ops(ds.graph, allow_isolated=True)
    cfg = _denoise_config(args, settings, beta=args.beta)

    files: List[Path] = []
    rows: List[Dict[str, Any]] = []
    for sigma, seed in itertools.product(args.sigma, args.seeds):
        noisy = inject_feature_noise(truth, NoiseSpec(sigma=sigma, seed=seed))
        for name in args.kernel:
            kernel = KernelFactory.create_kernel(name, ops, cfg, **_kernel_options(name, ds, noisy, settings))
            report = denoise_report(ops, kernel.apply(noisy), truth, noisy)
            files.append(write_csv(
                out_dir / "denoise" / f"{name}_sigma{_tag(sigma)}_seed{seed}.csv",
                report.rows(),
                ["node_id", "noise_before", "noise_after"],
            ))
            rows.append({"kernel": name, "sigma": sigma, "seed": seed, **report.summary()})
            logger.debug(f"{name} σ={sigma} seed={seed}: {report.mean_noise_before:.6g} -> {report.mean_noise:.6g}")

    fields = ["kernel", "sigma", "seed", "mean_noise_before", "mean_noise", "tv_before", "tv_after"]
    files.append(write_csv(out_dir / "summary.csv", rows, fields))

    aggregate = []
    for name, sigma in itertools.product(args.kernel, args.sigma):
        cell = [r for r in rows if r["kernel"] == name and r["sigma"] == sigma]
        aggregate.append({
            "kernel": name,
            "sigma": sigma,
            "n_seeds": len(cell),
            **{f: float(np.mean([r[f] for r in cell])) for f in fields[3:]},
            "seeds_denoised": sum(r["mean_noise"] < r["mean_noise_before"] for r in cell),
            "seeds_smoothed": sum(r["tv_after"] < r["tv_before"] for r in cell),
        })
        logger.info(f"{name} σ={sigma}: mean noise {aggregate[-1]['mean_noise_before']:.6g} "
                    f"-> {aggregate[-1]['mean_noise']:.6g}")
    files.append(atomic_write_json(out_dir / "summary.json", {"config": _config_echo(cfg), "results": aggregate}))
    return RunOutputs(files, list(args.seeds))


def cmd_classify(args, settings: Dict[str, Any], out_dir: Path, toolkit: ToolkitConfig) -> RunOutputs:
    """特征噪声 σ 与边噪声 r 的每个组合下，按种子重复训练并统计测试准确率"""
    _check_kernels([args.kernel])
    base, _ = load_source(args, settings)
    mode = _pick(args.normalize, settings["features"]["normalization"])
    features = normalize_features(base.features, mode).features
    sizes = default_split_sizes(base)
    denoise = _denoise_config(args, settings)

    files: List[Path] = []
    rows: List[Dict[str, Any]] = []
    for sigma, ratio in itertools.product(args.sigma, args.edge_ratio):
        for seed in args.seeds:
            spec = NoiseSpec(sigma=sigma, edge_ratio=ratio, seed=seed)
            graph, perturbation = perturb_edges(base.graph, spec)
            noisy = replace(base, graph=graph, features=inject_feature_noise(features, spec))
            ds = make_split(noisy, sizes, per_class_train=True, seed=seed)
            cfg = _train_config(args, settings, denoise, seed)
            params, history = train(ds, cfg)
            acc, f1 = evaluate(ds, params, cfg, "test")
            files.append(write_csv(
                out_dir / "classify" / f"history_sigma{_tag(sigma)}_r{_tag(ratio)}_seed{seed}.csv",
                history.rows(),
                ["epoch", "train_loss", "train_acc", "val_acc"],
            ))
            rows.append({
                "kernel": args.kernel,
                "sigma": sigma,
                "edge_ratio": ratio,
                "seed": seed,
                "test_accuracy": acc,
                "micro_f1": f1,
                "val_accuracy": history.final.val_acc,
                "beta": "" if params.beta is None else params.beta,
                "edges_added": len(perturbation.added),
                "edges_removed": len(perturbation.removed),
            })
            logger.info(f"{args.kernel} σ={sigma} r={ratio} seed={seed}: test acc {acc:.4f}")

    files.append(write_csv(out_dir / "results.csv", rows, list(rows[0].keys())))

    table = []
    for sigma, ratio in itertools.product(args.sigma, args.edge_ratio):
        accs = np.array([r["test_accuracy"] for r in rows if r["sigma"] == sigma and r["edge_ratio"] == ratio])
        table.append({
            "kernel": args.kernel,
            "sigma": sigma,
            "edge_ratio": ratio,
            "n_seeds": int(accs.size),
            "mean_accuracy": float(accs.mean()),
            "std_accuracy": float(accs.std()),
            "table": f"{100 * accs.mean():.1f} ± {100 * accs.std():.1f}",
        })
    files.append(write_csv(out_dir / "summary.csv", table, list(table[0].keys())))
    files.append(atomic_write_json(out_dir / "summary.json", {"results": table}))
    return RunOutputs(files, list(args.seeds))


def cmd_bias_variance(args, settings: Dict[str, Any], out_dir: Path, toolkit: ToolkitConfig) -> RunOutputs:
    """GSDN-F 在 α 网格上的 MSE / 方差 / 偏差平方（Monte-Carlo 与闭式解）"""
    if args.edge_list:
        graph = read_edge_list(args.edge_list)
    else:
        graph = load_source(args, settings)[0].graph
    ops = normalized_ops(graph)
    bv = settings["bias_variance"]
    sigma = _pick(args.sigma, bv["sigma"])
    x_hat = default_signal(ops, bump_node=args.bump_node, bump=args.bump)
    report = mc_bias_variance(
        ops,
        x_hat,
        sigma=sigma,
        alpha_grid=_pick(args.alpha_grid, bv["alpha_grid"]),
        k_order=_pick(args.k, bv["k_order"]),
        n_samples=_pick(args.samples, bv["n_samples"]),
        seed=args.seed,
        cap=toolkit.get_dense_cap(settings),
    )
    rows = [
        {**row, "mse_se": float(se), "mc_only": bool(flag)}
        for row, se, flag in zip(report.rows(), report.mse_se, report.mc_only)
    ]
    files = [write_csv(
        out_dir / "bias_variance.csv",
        rows,
        ["alpha", "mse", "var_mc", "var_closed", "bias_sq_mc", "bias_sq_closed", "mse_se", "mc_only"],
    )]

    try:
        mono = prop3_monotonicity_check(report)
        monotonicity = mono._asdict()
    except (ValueError, AlphaRangeError) as e:
        logger.warning(f"monotonicity check skipped: {e}")
        monotonicity = {"skipped": str(e)}
    summary = {
        "num_nodes": ops.n,
        "sigma": sigma,
        "n_samples": report.n_samples,
        "monotonicity": monotonicity,
    }
    files.append(atomic_write_json(out_dir / "summary.json", summary))
    return RunOutputs(files, [args.seed])


def cmd_sweep(args, settings: Dict[str, Any], out_dir: Path, toolkit: ToolkitConfig) -> RunOutputs:
    """在 α 或 K 网格上扫描测试准确率，并给出 Spearman 趋势"""
    _check_kernels([args.kernel])
    base, _ = load_source(args, settings)
    mode = _pick(args.normalize, settings["features"]["normalization"])
    ds = replace(base, features=normalize_features(base.features, mode).features)
    ds = make_split(ds, default_split_sizes(ds), per_class_train=True, seed=args.split_seed)
    base_cfg = _train_config(args, settings, _denoise_config(args, settings), seed=0)
    param, grid = ("alpha", args.grid_alpha) if args.grid_alpha is not None else ("k_order", args.grid_k)

    concurrency = _pick(args.max_concurrency, settings["sweep"]["max_concurrency"])
    if concurrency > 1:
        rows = asyncio.run(asweep(ds, base_cfg, param, grid, seeds=args.seeds, max_concurrency=concurrency))
    else:
        rows = sweep(ds, base_cfg, param, grid, seeds=args.seeds)

    files = [write_csv(
        out_dir / "sweep.csv",
        [
            {
                param: r.value,
                "mean_accuracy": r.mean_accuracy,
                "std_accuracy": r.std_accuracy,
                "accuracies": ";".join(repr(a) for a in r.accuracies),
            }
            for r in rows
        ],
        [param, "mean_accuracy", "std_accuracy", "accuracies"],
    )]
    try:
        trend = sweep_trend(rows)
        trend_payload = {"param": param, "rho": trend.rho, "pvalue": trend.pvalue}
    except UndefinedCorrelationError as e:
        logger.warning(f"sweep trend undefined: {e}")
        trend_payload = {"param": param, "rho": None, "pvalue": None, "error": str(e)}
    files.append(atomic_write_json(out_dir / "sweep_trend.json", trend_payload))
    return RunOutputs(files, list(args.seeds))


def cmd_gen_sbm(args, settings: Dict[str, Any], out_dir: Path, toolkit: ToolkitConfig) -> RunOutputs:
    spec = _sbm_spec(settings, args.sbm, seed=args.seed)
    paths = write_sbm_files(gen_sbm(spec), out_dir, name=args.name)
    logger.info(f"wrote SBM dataset {args.name!r} (seed={spec.seed}) to {out_dir}")
    return RunOutputs(list(paths.values()), [spec.seed])


def cmd_replay(args) -> int:
    """按清单中记录的 argv、解析后的配置和 GSD_* 环境变量重新执行，--out 可改写输出目录"""
    try:
        manifest = read_json(args.manifest, schema=RUN_MANIFEST_SCHEMA)
    except (OSError, json.JSONDecodeError, ManifestError) as e:
        _print_error(e)
        return 2
    argv = list(manifest["argv"])
    if args.out:
        argv += ["--out", str(args.out)]
    if manifest["version"] != __version__:
        logger.warning(f"manifest was written by version {manifest['version']}, running {__version__}")

    recorded = manifest["config"]
    environment = dict(recorded.get("environment", {}))
    # 配置已经解析并记录在 settings 中，不再读取 GSD_CONFIG
    environment["GSD_CONFIG"] = None
    return _execute(
        build_parser().parse_args(argv),
        argv,
        ToolkitConfig(overrides=environment),
        settings=recorded.get("settings"),
    )


# ---------------------------------------------------------------------------
# 入口
# ---------------------------------------------------------------------------


def _config_echo(value: Any) -> Any:
    if hasattr(value, "__dataclass_fields__"):
        return {k: _config_echo(getattr(value, k)) for k in value.__dataclass_fields__}
    if isinstance(value, dict):
        return {str(k): _config_echo(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_config_echo(v) for v in value]
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    return value


def _print_error(error: BaseException) -> None:
    print(json.dumps({"error": {"type": type(error).__name__, "message": str(error)}}), file=sys.stderr)


def _relative(path: Path, out_dir: Path) -> str:
    try:
        return Path(path).resolve().relative_to(out_dir.resolve()).as_posix()
    except ValueError:
        return str(path)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """命令行入口

    Returns:
        0 全部完成；2 输入或数据错误；1 其他失败
    """
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    if args.command == "replay":
        return cmd_replay(args)
    return _execute(args, argv, ToolkitConfig())


def _execute(
    args: argparse.Namespace,
    argv: List[str],
    toolkit: ToolkitConfig,
    settings: Optional[Dict[str, Any]] = None,
) -> int:
    """执行一个子命令并写出运行清单；settings 为 None 时按 --config / GSD_CONFIG 读取"""
    out_dir = Path(args.out) if args.out else toolkit.get_output_dir() / args.command
    setup_logging(out_dir, (args.log_level or toolkit.get_log_level()).upper())

    manifest = RunManifest(
        command=args.command,
        argv=argv,
        config={},
        seeds=[],
        version=__version__,
        outputs=[],
        duration_seconds=0.0,
    )
    started = time.perf_counter()
    code = 0
    try:
        if not toolkit.validate():
            raise ValueError("invalid toolkit environment, see log for details")
        if settings is None:
            settings = read_config(args.config or toolkit.get_config_path())
        manifest.config = {
            "settings": settings,
            "environment": toolkit.snapshot(),
            "args": _config_echo({k: v for k, v in vars(args).items() if k != "handler"}),
        }
        result = args.handler(args, settings, out_dir, toolkit)
        manifest.outputs = sorted(_relative(p, out_dir) for p in result.files)
        manifest.seeds = [int(s) for s in result.seeds]
    except Exception as e:
        code = 2 if isinstance(e, (GraphDenoiseError, ValueError)) else 1
        manifest.status = "error"
        manifest.error = {"type": type(e).__name__, "message": str(e)}
        logger.opt(exception=e).error(f"{args.command} failed: {e}")
        _print_error(e)
    finally:
        manifest.duration_seconds = round(time.perf_counter() - started, 3)
        payload = manifest.to_dict()
        validate_payload(payload, RUN_MANIFEST_SCHEMA, name="run manifest")
        atomic_write_json(out_dir / RUN_MANIFEST_NAME, payload)

    if code == 0:
        logger.success(f"{args.command} finished in {manifest.duration_seconds}s, {len(manifest.outputs)} file(s) in {out_dir}")
    logger.complete()
    return code


if __name__ == "__main__":
    sys.exit(main())
