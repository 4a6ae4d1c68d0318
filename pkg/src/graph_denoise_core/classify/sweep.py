"""
参数敏感性扫描 - α 或 K 网格上的多种子测试准确率
"""

import asyncio
from dataclasses import replace
from typing import List, NamedTuple, Sequence

import numpy as np
from loguru import logger
from scipy.stats import spearmanr

from ..exceptions import UndefinedCorrelationError
from ..models.config import TrainConfig
from ..models.dataset import LabeledDataset
from ..models.report import SweepRow
from .trainer import evaluate, train

SWEEP_PARAMS = ("alpha", "k_order")
MIN_GRID_POINTS = 2
MIN_SEEDS = 3


def _check_sweep(param: str, grid: Sequence[float], seeds: Sequence[int]) -> None:
    if param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}, expected one of {SWEEP_PARAMS}")
    if len(grid) < MIN_GRID_POINTS:
        raise ValueError(f"sweep needs >= {MIN_GRID_POINTS} grid points, got {len(grid)}")
    if len(seeds) < MIN_SEEDS:
        raise ValueError(f"sweep needs >= {MIN_SEEDS} seeds, got {len(seeds)}")


def _point_config(base_cfg: TrainConfig, param: str, value: float, seed: int) -> TrainConfig:
    value = int(value) if param == "k_order" else float(value)
    return replace(base_cfg, seed=seed, denoise=replace(base_cfg.denoise, **{param: value}))


def _run_point(ds: LabeledDataset, cfg: TrainConfig) -> float:
    params, _ = train(ds, cfg)
    acc, _ = evaluate(ds, params, cfg, "test")
    return acc


def _row(value: float, accuracies: Sequence[float]) -> SweepRow:
    accs = np.asarray(accuracies, dtype=np.float64)
    return SweepRow(
        value=float(value),
        mean_accuracy=float(accs.mean()),
        std_accuracy=float(accs.std()),
        accuracies=tuple(float(a) for a in accs),
    )


def sweep(
    ds: LabeledDataset,
    base_cfg: TrainConfig,
    param: str,
    grid: Sequence[float],
    seeds: Sequence[int] = (0, 1, 2),
) -> List[SweepRow]:
    """逐个网格点、逐个种子训练并记录测试准确率的均值与标准差

    Args:
        ds: 已划分的数据集
        base_cfg: 基础训练配置
        param: "alpha" 或 "k_order"
        grid: 参数取值（>= 2 个）
        seeds: 训练种子（>= 3 个）

    Returns:
        List[SweepRow]: 与 grid 顺序一致
    """
    _check_sweep(param, grid, seeds)
    rows = []
    for value in grid:
        accs = [_run_point(ds, _point_config(base_cfg, param, value, s)) for s in seeds]
        rows.append(_row(value, accs))
        logger.info(f"sweep {param}={value}: {rows[-1].mean_accuracy:.4f} ± {rows[-1].std_accuracy:.4f}")
    return rows


async def asweep(
    ds: LabeledDataset,
    base_cfg: TrainConfig,
    param: str,
    grid: Sequence[float],
    seeds: Sequence[int] = (0, 1, 2),
    max_concurrency: int = 4,
) -> List[SweepRow]:
    """sweep 的异步版本，每次训练放到线程中执行，结果与 sweep 相同"""
    _check_sweep(param, grid, seeds)
    semaphore = asyncio.Semaphore(max_concurrency)

    async def run(value: float, seed: int) -> float:
        async with semaphore:
            return await asyncio.to_thread(_run_point, ds, _point_config(base_cfg, param, value, seed))

    tasks = [[run(value, s) for s in seeds] for value in grid]
    results = await asyncio.gather(*(asyncio.gather(*point) for point in tasks))
    return [_row(value, accs) for value, accs in zip(grid, results)]


class SweepTrend(NamedTuple):
    rho: float
    pvalue: float


def sweep_trend(rows: Sequence[SweepRow]) -> SweepTrend:
    """参数取值与平均准确率之间的 Spearman 相关系数"""
    if len(rows) < MIN_GRID_POINTS:
        raise ValueError(f"trend needs >= {MIN_GRID_POINTS} rows")
    values = np.array([r.value for r in rows])
    means = np.array([r.mean_accuracy for r in rows])
    if np.ptp(means) == 0 or np.ptp(values) == 0:
        raise UndefinedCorrelationError("sweep accuracies or values are constant")
    result = spearmanr(values, means)
    return SweepTrend(rho=float(result.statistic), pvalue=float(result.pvalue))
