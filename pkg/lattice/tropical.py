# lattice/tropical.py

"""
热带黎曼 theta 函数。

||Psi||(x) = 1/2 min_n (x+n)^T Q (x+n)，x 为格基坐标；
Psi(x) = ||Psi||(x) - 1/2 x^T Q x。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, Sequence, Tuple, Union

import numpy as np

from core import config as config_module
from core.errors import RankMismatch
from lattice.enumeration import covering_box, covering_radius_sq, enumerate_ellipsoid
from lattice.gram import GramLattice, TorusCoordinate

logger = logging.getLogger(__name__)

IntVector = Tuple[int, ...]


@dataclass(frozen=True)
class TropicalThetaValue:
    value: Union[float, Fraction]
    minimizers: FrozenSet[IntVector]

    def __iter__(self):
        # 允许 value, minimizers = tropical_theta_norm(...)
        return iter((self.value, self.minimizers))


def _as_coordinate(x) -> TorusCoordinate:
    return x if isinstance(x, TorusCoordinate) else TorusCoordinate.reduce(x)


def _exact_quadratic(lattice: GramLattice, y: Sequence[Fraction]) -> Fraction:
    r = lattice.rank
    return sum(y[i] * lattice.gram[i][j] * y[j] for i in range(r) for j in range(r))


def tropical_theta_norm(lattice: GramLattice, x, tie_tolerance: float | None = None) -> TropicalThetaValue:
    """
    ||Psi||(x) 以及全部极小点 n (并列窗口内)。

    先以四舍五入候选给出初始半径，再枚举该半径内所有整点，半径保证包含最优解。
    Gram 矩阵与坐标都是有理数时，极小值与极小点集合按精确算术给出。
    """
    point = _as_coordinate(x)
    if lattice.rank == 0:
        zero = Fraction(0) if lattice.exact else 0.0
        return TropicalThetaValue(zero, frozenset({()}))
    if len(point) != lattice.rank:
        raise RankMismatch(f"坐标长度 {len(point)} 与格的秩 {lattice.rank} 不一致", rank=lattice.rank)

    tol = config_module.get_current_config()["TIE_TOLERANCE"] if tie_tolerance is None else tie_tolerance
    Q = lattice.matrix
    xv = point.array
    n0 = -np.round(xv)
    y0 = xv + n0
    radius_sq = float(y0 @ Q @ y0) + 2 * tol
    candidates = enumerate_ellipsoid(Q, -xv, radius_sq)

    exact = lattice.exact and all(isinstance(v, Fraction) for v in point.x)
    if exact:
        values = [_exact_quadratic(lattice, [point.x[i] + int(n[i]) for i in range(lattice.rank)]) for n in candidates]
        best = min(values)
        minimizers = frozenset(tuple(int(v) for v in n) for n, val in zip(candidates, values) if val == best)
        return TropicalThetaValue(best / 2, minimizers)

    Y = candidates + xv
    values = 0.5 * np.einsum("ki,ij,kj->k", Y, Q, Y)
    best = float(values.min())
    keep = values <= best + tol
    minimizers = frozenset(tuple(int(v) for v in n) for n in candidates[keep])
    return TropicalThetaValue(max(best, 0.0), minimizers)


def tropical_psi(lattice: GramLattice, x) -> float:
    """Psi(x) = ||Psi||(x) - 1/2 x^T Q x，恒有 Psi <= 0。"""
    point = _as_coordinate(x)
    if lattice.rank == 0:
        return 0.0
    xv = point.array
    norm_value = float(tropical_theta_norm(lattice, point).value)
    return norm_value - 0.5 * float(xv @ lattice.matrix @ xv)


def batch_theta_norm(Q: np.ndarray, X: np.ndarray, candidates: np.ndarray | None = None) -> np.ndarray:
    """
    对一批坐标 X (形状 N x r，位于 [0,1)^r) 向量化计算 ||Psi||。
    候选整点集合对整个单位方体一次性给出，适合求积。
    """
    if candidates is None:
        candidates = covering_box(Q, covering_radius_sq(Q))
    best = np.full(X.shape[0], np.inf)
    for n in candidates:
        Y = X + n
        np.minimum(best, np.einsum("ki,ij,kj->k", Y, Q, Y), out=best)
    return 0.5 * best


def pruned_candidates(Q: np.ndarray) -> np.ndarray:
    """covering_box 中真正可能成为某个 x in [0,1)^r 的极小点的整点 (按包络半径剪枝)。"""
    box = covering_box(Q, covering_radius_sq(Q))
    if Q.shape[0] == 0:
        return box
    # 对固定 n，min_{x in [0,1]^r} (x+n)^T Q (x+n) 的下界：用 Q 的最小特征值乘到盒子距离
    lam_min = float(np.linalg.eigvalsh(Q)[0])
    gap = np.maximum(0, np.maximum(-1 - box, box))  # 到区间 [-1, 0] 的距离 (逐坐标)
    lower = lam_min * (gap ** 2).sum(axis=1)
    return box[lower <= covering_radius_sq(Q) * (1 + 1e-12)]
