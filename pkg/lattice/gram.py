# lattice/gram.py

"""
欧几里得格 (Euclidean lattice) 的 Gram 矩阵表示。

一个极化实环面 Sigma = Lambda_R / Lambda 只通过基下的 Gram 矩阵 Q 保存。
形如 Sigma_B = R^g / B Z^g 的环面对应 Q = B，因为
||Psi_B||(Bx) = 1/2 min_n (x+n)^T B (x+n)。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

import numpy as np

from core import config as config_module
from core.errors import InvalidSpec, NotPositiveDefinite, NotSymmetric

logger = logging.getLogger(__name__)

Scalar = Union[Fraction, float]


@dataclass(frozen=True)
class GramLattice:
    """秩为 rank 的格；gram 为正定对称矩阵，exact=True 时所有元素为 Fraction。"""
    rank: int
    gram: Tuple[Tuple[Scalar, ...], ...]
    exact: bool = False

    @property
    def matrix(self) -> np.ndarray:
        if self.rank == 0:
            return np.zeros((0, 0))
        return np.array([[float(v) for v in row] for row in self.gram], dtype=float)

    def scaled(self, c: Scalar) -> "GramLattice":
        """c * Q；c 为正数。"""
        exact = self.exact and isinstance(c, (int, Fraction))
        conv = Fraction if exact else float
        rows = tuple(tuple(conv(c) * conv(v) for v in row) for row in self.gram)
        return GramLattice(self.rank, rows, exact)

    def transformed(self, R: Sequence[Sequence[int]]) -> "GramLattice":
        """R^T Q R，R 为整数矩阵 (通常是幺模矩阵)。"""
        if self.exact:
            Rm = [[int(v) for v in row] for row in R]
            r = self.rank
            rows = tuple(
                tuple(
                    sum(Rm[k][i] * self.gram[k][l] * Rm[l][j] for k in range(r) for l in range(r))
                    for j in range(r)
                )
                for i in range(r)
            )
            return GramLattice(r, tuple(tuple(Fraction(v) for v in row) for row in rows), True)
        Rm = np.asarray(R, dtype=float)
        Q = Rm.T @ self.matrix @ Rm
        Q = (Q + Q.T) / 2
        return GramLattice(self.rank, tuple(tuple(float(v) for v in row) for row in Q), False)


@dataclass(frozen=True)
class TorusCoordinate:
    """环面上的点，以格基坐标给出并约化到 [0,1)。"""
    x: Tuple[float, ...]

    @classmethod
    def reduce(cls, values: Sequence[float]) -> "TorusCoordinate":
        reduced = []
        for v in values:
            if isinstance(v, Fraction):
                r = v - (v.numerator // v.denominator)
            else:
                if not np.isfinite(float(v)):
                    raise InvalidSpec(f"环面坐标必须是有限数，收到 {v!r}", coordinate=str(v))
                r = float(v) - np.floor(float(v))
                if r >= 1.0:  # -1e-17 mod 1 在浮点下会得到 1.0
                    r = 0.0
            reduced.append(r)
        return cls(tuple(reduced))

    @property
    def array(self) -> np.ndarray:
        return np.array([float(v) for v in self.x], dtype=float)

    def __len__(self) -> int:
        return len(self.x)


def _coerce_entry(value) -> Scalar:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return Fraction(int(value[0]), int(value[1]))
    return float(value)


def symmetric_pivots(rows: Sequence[Sequence[Scalar]]) -> list:
    """
    对称三角分解 Q = L D L^T 的主元 (无置换)。
    Fraction 输入时全程精确计算。
    """
    n = len(rows)
    a = [list(row) for row in rows]
    pivots = []
    for k in range(n):
        pivot = a[k][k]
        pivots.append(pivot)
        if pivot <= 0:
            break
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            for j in range(k + 1, n):
                a[i][j] = a[i][j] - factor * a[k][j]
    return pivots


def validate_gram(Q: Sequence[Sequence]) -> GramLattice:
    """
    检查 Q 是否为对称正定矩阵并返回 GramLattice。

    元素可以是数值或 [num, den] 有理数；全部为有理数 (或整数) 时进入精确模式。
    """
    rows = [list(row) for row in Q]
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise NotSymmetric(f"Gram 矩阵必须是方阵，收到 {n} 行、各行长度 {[len(r) for r in rows]}")
    if n == 0:
        return GramLattice(0, (), True)

    entries = [[_coerce_entry(v) for v in row] for row in rows]
    exact = all(isinstance(v, Fraction) for row in entries for v in row)
    if not exact:
        entries = [[float(v) for v in row] for row in entries]

    rtol = config_module.get_current_config()["SYMMETRY_RTOL"]
    for i in range(n):
        for j in range(i + 1, n):
            a, b = entries[i][j], entries[j][i]
            if exact:
                if a != b:
                    raise NotSymmetric(f"Gram 矩阵不对称: Q[{i}][{j}]={a} != Q[{j}][{i}]={b}", index=[i, j])
            else:
                scale = max(abs(a), abs(b), 1e-300)
                if abs(a - b) > rtol * scale:
                    raise NotSymmetric(f"Gram 矩阵不对称: Q[{i}][{j}]={a} != Q[{j}][{i}]={b}", index=[i, j])
        if not exact:
            for j in range(i + 1, n):
                avg = (entries[i][j] + entries[j][i]) / 2
                entries[i][j] = entries[j][i] = avg

    pivots = symmetric_pivots(entries)
    for k, pivot in enumerate(pivots):
        if not pivot > 0:
            raise NotPositiveDefinite(
                f"Gram 矩阵不是正定的: 第 {k} 个主元为 {float(pivot):.6g}",
                pivot_index=k,
            )
    return GramLattice(n, tuple(tuple(row) for row in entries), exact)
