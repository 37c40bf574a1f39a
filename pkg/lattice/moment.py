# lattice/moment.py

"""
热带矩 I(Sigma) = 2 * int_{[0,1]^r} ||Psi||(x) dx 的数值求积。

- grid: 每个坐标轴上的复合中点公式，误差估计为与上一级 (分辨率减半) 网格的差。
- low-discrepancy: 加扰 Sobol 点列，误差估计为前半段点列与全体点列估计值之差。
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np
from scipy.stats import qmc

from core import config as config_module
from core.errors import InvalidSpec, ResolutionTooSmall
from lattice.gram import GramLattice
from lattice.tropical import batch_theta_norm, pruned_candidates

logger = logging.getLogger(__name__)

GRID = "grid"
LOW_DISCREPANCY = "low-discrepancy"
METHODS = (GRID, LOW_DISCREPANCY)


@dataclass(frozen=True)
class MomentEstimate:
    estimate: float
    error_estimate: float
    method: str
    points: int

    def __iter__(self):
        return iter((self.estimate, self.error_estimate))


def _midpoint_chunks(rank: int, resolution: int, chunk: int) -> Iterator[np.ndarray]:
    """按字典序分块产生 resolution^rank 个中点。"""
    total = resolution ** rank
    axis = (np.arange(resolution) + 0.5) / resolution
    for start in range(0, total, chunk):
        flat = np.arange(start, min(start + chunk, total))
        digits = np.empty((flat.size, rank))
        rest = flat
        for i in range(rank - 1, -1, -1):
            digits[:, i] = axis[rest % resolution]
            rest = rest // resolution
        yield digits


def _grid_mean(Q: np.ndarray, candidates: np.ndarray, resolution: int, chunk: int) -> float:
    partial = [float(batch_theta_norm(Q, X, candidates).sum()) for X in _midpoint_chunks(Q.shape[0], resolution, chunk)]
    return math.fsum(partial) / resolution ** Q.shape[0]


def _points_mean(Q: np.ndarray, candidates: np.ndarray, X: np.ndarray, chunk: int) -> float:
    partial = [float(batch_theta_norm(Q, X[s:s + chunk], candidates).sum()) for s in range(0, X.shape[0], chunk)]
    return math.fsum(partial) / X.shape[0]


def default_method(rank: int) -> str:
    return GRID if config_module.moment_resolution_for_rank(rank) is not None else LOW_DISCREPANCY


def tropical_moment(lattice: GramLattice, method: str | None = None, resolution: int | None = None,
                    seed: int | None = None) -> MomentEstimate:
    """
    热带矩及其误差估计。

    resolution 在 grid 模式下是每轴的点数，在 low-discrepancy 模式下是点的总数
    (向上取到 2 的幂)。秩为 0 时结果恒为 0。
    """
    current_config = config_module.get_current_config()
    rank = lattice.rank
    method = method or default_method(rank)
    if method not in METHODS:
        raise InvalidSpec(f"未知的求积方法: {method}", method=method)
    if rank == 0:
        return MomentEstimate(0.0, 0.0, method, 1)

    Q = lattice.matrix
    candidates = pruned_candidates(Q)
    chunk = current_config["MOMENT_CHUNK"]

    if method == GRID:
        if resolution is None:
            resolution = config_module.moment_resolution_for_rank(rank, current_config) or 64
        if resolution < 2:
            raise ResolutionTooSmall(
                f"网格模式下每轴至少需要 2 个点，收到 {resolution}", resolution=resolution, rank=rank
            )
        logger.debug(f"中点网格求积: 秩 {rank}, 每轴 {resolution} 点, 候选整点 {len(candidates)} 个")
        fine = 2 * _grid_mean(Q, candidates, resolution, chunk)
        coarse = 2 * _grid_mean(Q, candidates, resolution // 2, chunk)
        return MomentEstimate(fine, abs(fine - coarse), GRID, resolution ** rank)

    if resolution is None:
        resolution = current_config["MOMENT_QMC_POINTS"]
    if resolution < 2:
        raise ResolutionTooSmall(f"低差异序列至少需要 2 个点，收到 {resolution}", resolution=resolution, rank=rank)
    m = max(1, math.ceil(math.log2(resolution)))
    seed = current_config["DEFAULT_SEED"] if seed is None else seed
    sampler = qmc.Sobol(d=rank, scramble=True, seed=seed)
    X = sampler.random_base2(m)
    logger.debug(f"Sobol 求积: 秩 {rank}, {X.shape[0]} 点, 候选整点 {len(candidates)} 个")
    full = 2 * _points_mean(Q, candidates, X, chunk)
    half = 2 * _points_mean(Q, candidates, X[: X.shape[0] // 2], chunk)
    return MomentEstimate(full, abs(full - half), LOW_DISCREPANCY, X.shape[0])
