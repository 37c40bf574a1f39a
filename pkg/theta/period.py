# theta/period.py

"""
Siegel 上半空间中的周期矩阵以及 z = a + tau b 的实坐标表示。
"""

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from core import config as config_module
from core.errors import InvalidSpec, NotInSiegelSpace, NotSymmetric
from lattice.gram import symmetric_pivots

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class PeriodMatrix:
    """tau 为 g x g 复对称矩阵，虚部正定。请通过 validate_period 构造。"""
    g: int
    tau: np.ndarray

    @property
    def imag(self) -> np.ndarray:
        return self.tau.imag

    @property
    def real(self) -> np.ndarray:
        return self.tau.real

    def z_of(self, point: "RealPairPoint") -> np.ndarray:
        return point.a + self.tau @ point.b

    def pair_of(self, z: Sequence[complex]) -> "RealPairPoint":
        """z 的 (a, b) 坐标: b = (Im tau)^{-1} Im z, a = Re z - Re(tau) b。"""
        z = np.asarray(z, dtype=complex)
        b = np.linalg.solve(self.imag, z.imag)
        a = z.real - self.real @ b
        return RealPairPoint(a, b)


@dataclass(frozen=True, eq=False)
class RealPairPoint:
    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", np.asarray(self.a, dtype=float))
        object.__setattr__(self, "b", np.asarray(self.b, dtype=float))
        if not (np.all(np.isfinite(self.a)) and np.all(np.isfinite(self.b))):
            raise InvalidSpec("(a, b) 中含有非有限值")
        if self.a.shape != self.b.shape:
            raise InvalidSpec(f"a 与 b 的长度不一致: {self.a.shape} vs {self.b.shape}")

    def reduced(self) -> "RealPairPoint":
        return RealPairPoint(self.a - np.floor(self.a), self.b - np.floor(self.b))


def validate_period(tau: Sequence[Sequence[complex]], max_genus: int | None = None) -> PeriodMatrix:
    """
    检查 tau 属于 Siegel 上半空间。

    对称性按 1e-12 相对误差检查 (之后对称化)；虚部的正定性用对称三角分解的主元判断，
    失败时 NotInSiegelSpace 带出第一个非正主元的下标。
    """
    T = np.atleast_2d(np.asarray(tau, dtype=complex))
    g = T.shape[0]
    if T.ndim != 2 or T.shape[1] != g or g == 0:
        raise InvalidSpec(f"周期矩阵必须是非空方阵，收到形状 {T.shape}")
    if max_genus is None:
        max_genus = config_module.get_current_config()["THETA_MAX_GENUS"]
    if g > max_genus:
        raise InvalidSpec(f"亏格 {g} 超过上限 {max_genus} (可在配置中调整 THETA_MAX_GENUS)", g=g, max_genus=max_genus)

    scale = max(float(np.abs(T).max()), 1e-300)
    if float(np.abs(T - T.T).max()) > 1e-12 * scale:
        raise NotSymmetric("周期矩阵 tau 不对称")
    T = (T + T.T) / 2

    for k, pivot in enumerate(symmetric_pivots(T.imag.tolist())):
        if not pivot > 0:
            raise NotInSiegelSpace(
                f"Im(tau) 不是正定的: 第 {k} 个主元为 {pivot:.6g}",
                pivot_index=k,
            )
    return PeriodMatrix(g, T)
