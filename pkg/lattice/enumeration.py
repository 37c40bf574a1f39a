# lattice/enumeration.py

"""
椭球内整点枚举 (Fincke-Pohst 深度优先)。

给定正定 Q、中心 c 与半径平方 R2，列出满足 (n-c)^T Q (n-c) <= R2 的全部整数向量 n。
最近向量、短向量和 theta 级数截断都建立在这个枚举之上。
"""

import logging
import math
from typing import Iterator, List, Sequence

import numpy as np
import scipy.linalg

from core.errors import TruncationFailure

logger = logging.getLogger(__name__)

# 判定边界点时给半径留的相对余量，保证浮点舍入不会漏掉恰好在边界上的点
_RADIUS_SLACK = 1e-9


def _upper_factor(Q: np.ndarray):
    U = scipy.linalg.cholesky(Q, lower=False)
    diag = np.diag(U) ** 2
    mu = U / np.diag(U)[:, None]
    return diag, mu


def iter_ellipsoid(Q: np.ndarray, center: Sequence[float], radius_sq: float) -> Iterator[np.ndarray]:
    """逐个产生椭球内的整点，顺序由枚举树决定 (确定性)。"""
    r = Q.shape[0]
    if r == 0:
        yield np.zeros(0, dtype=np.int64)
        return
    if radius_sq < 0:
        return
    diag, mu = _upper_factor(np.asarray(Q, dtype=float))
    c = np.asarray(center, dtype=float)
    bound = radius_sq * (1 + _RADIUS_SLACK) + _RADIUS_SLACK
    n = np.zeros(r, dtype=np.int64)

    def descend(i: int, budget: float):
        # 坐标 i 的条件中心：c_i - sum_{j>i} mu_ij (n_j - c_j)
        shift = float(mu[i, i + 1:] @ (n[i + 1:] - c[i + 1:])) if i + 1 < r else 0.0
        centre = c[i] - shift
        half = math.sqrt(max(budget, 0.0) / diag[i])
        lo, hi = math.ceil(centre - half), math.floor(centre + half)
        for k in range(lo, hi + 1):
            used = diag[i] * (k - centre) ** 2
            if used > budget:
                continue
            n[i] = k
            if i == 0:
                yield n.copy()
            else:
                yield from descend(i - 1, budget - used)
        n[i] = 0

    yield from descend(r - 1, bound)


def enumerate_ellipsoid(Q: np.ndarray, center: Sequence[float], radius_sq: float,
                        budget: int | None = None) -> np.ndarray:
    """返回椭球内全部整点 (形状 k x r)；超过 budget 时抛出 TruncationFailure。"""
    points: List[np.ndarray] = []
    for p in iter_ellipsoid(Q, center, radius_sq):
        points.append(p)
        if budget is not None and len(points) > budget:
            raise TruncationFailure(
                f"椭球枚举超过项数上限 {budget} (半径平方 {radius_sq:.4g})",
                budget=budget,
            )
    r = Q.shape[0]
    if not points:
        return np.zeros((0, r), dtype=np.int64)
    return np.vstack(points)


def covering_radius_sq(Q: np.ndarray) -> float:
    """
    max_x min_n (x+n)^T Q (x+n) 的一个上界：四舍五入后每个坐标的偏差不超过 1/2。
    """
    return 0.25 * float(np.abs(Q).sum())


def covering_box(Q: np.ndarray, radius_sq: float) -> np.ndarray:
    """
    对所有 x in [0,1)^r 同时成立的候选整点集合:
    任何满足 (x+n)^T Q (x+n) <= radius_sq 的 n 都落在返回的盒子里。
    """
    r = Q.shape[0]
    if r == 0:
        return np.zeros((1, 0), dtype=np.int64)
    Qinv = np.linalg.inv(Q)
    rho = np.sqrt(radius_sq * np.diag(Qinv))
    ranges = [np.arange(math.floor(-1 - rho[i]), math.ceil(rho[i]) + 1) for i in range(r)]
    grids = np.meshgrid(*ranges, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def minimum_norm(Q: np.ndarray) -> float:
    """最短非零格向量的范数 min_{n != 0} n^T Q n；秩 0 时返回 inf。"""
    Q = np.asarray(Q, dtype=float)
    if Q.shape[0] == 0:
        return math.inf
    candidates = enumerate_ellipsoid(Q, np.zeros(Q.shape[0]), float(np.diag(Q).min()))
    norms = np.einsum("ki,ij,kj->k", candidates, Q, candidates)
    return float(norms[np.any(candidates != 0, axis=1)].min())
