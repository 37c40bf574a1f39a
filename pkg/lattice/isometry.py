# lattice/isometry.py

"""
小秩格的同构判定: 是否存在幺模整数矩阵 R 使 R^T Q1 R = Q2。

Q2 的第 j 个基向量只能映到 Q1 中范数为 Q2[j][j] 的向量，
对这些短向量逐列回溯并检查内积即可穷尽所有候选。
"""

import logging
from enum import Enum
from typing import List

import numpy as np

from core import config as config_module
from core.errors import RankMismatch
from lattice.enumeration import iter_ellipsoid
from lattice.gram import GramLattice, symmetric_pivots

logger = logging.getLogger(__name__)


class IsometryResult(str, Enum):
    ISOMETRIC = "isometric"
    NOT_ISOMETRIC = "not_isometric"
    INCONCLUSIVE = "inconclusive"


def _det(lattice: GramLattice):
    if lattice.exact:
        value = 1
        for p in symmetric_pivots(lattice.gram):
            value *= p
        return value
    return float(np.linalg.det(lattice.matrix))


def _close(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    return abs(float(a) - float(b)) <= 1e-9 * max(1.0, abs(float(a)), abs(float(b)))


def _pair(lattice: GramLattice, u: np.ndarray, v: np.ndarray):
    r = lattice.rank
    if lattice.exact:
        return sum(int(u[i]) * lattice.gram[i][j] * int(v[j]) for i in range(r) for j in range(r))
    return float(u @ lattice.matrix @ v)


def _vectors_of_norm(lattice: GramLattice, target, exact: bool) -> List[np.ndarray]:
    found = []
    for v in iter_ellipsoid(lattice.matrix, np.zeros(lattice.rank), float(target)):
        if v.any() and _close(_pair(lattice, v, v), target, exact):
            found.append(v.copy())
    return found


def isometry_check(L1: GramLattice, L2: GramLattice, max_rank: int | None = None) -> IsometryResult:
    if L1.rank != L2.rank:
        raise RankMismatch(f"秩不一致: {L1.rank} != {L2.rank}", rank_1=L1.rank, rank_2=L2.rank)
    if max_rank is None:
        max_rank = config_module.get_current_config()["ISOMETRY_MAX_RANK"]
    r = L1.rank
    if r == 0:
        return IsometryResult.ISOMETRIC
    if r > max_rank:
        logger.warning(f"秩 {r} 超过同构判定上限 {max_rank}，返回 inconclusive")
        return IsometryResult.INCONCLUSIVE

    exact = L1.exact and L2.exact
    if not _close(_det(L1), _det(L2), exact):
        return IsometryResult.NOT_ISOMETRIC

    columns = [_vectors_of_norm(L1, L2.gram[j][j], exact) for j in range(r)]
    if any(not c for c in columns):
        return IsometryResult.NOT_ISOMETRIC

    chosen: List[np.ndarray] = []

    def extend(j: int) -> bool:
        if j == r:
            R = np.column_stack(chosen)
            return round(abs(np.linalg.det(R))) == 1
        for v in columns[j]:
            if all(_close(_pair(L1, chosen[i], v), L2.gram[i][j], exact) for i in range(j)):
                chosen.append(v)
                if extend(j + 1):
                    return True
                chosen.pop()
        return False

    if extend(0):
        logger.debug(f"找到幺模见证矩阵: {np.column_stack(chosen).tolist()}")
        return IsometryResult.ISOMETRIC
    return IsometryResult.NOT_ISOMETRIC
