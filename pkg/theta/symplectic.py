# theta/symplectic.py

"""
Sp_{2g}(Z) 的两类生成元在 (tau, z) 上的作用；||theta|| 在这些作用下不变。
"""

import logging
from typing import Sequence, Tuple

import numpy as np

from core.errors import InvalidSpec
from theta.period import PeriodMatrix, validate_period

logger = logging.getLogger(__name__)


def translate(tau: PeriodMatrix, z: Sequence[complex], S: Sequence[Sequence[int]]) -> Tuple[PeriodMatrix, np.ndarray]:
    """
    tau -> tau + S，S 为整数对称矩阵。

    z 同时平移半个对角线 diag(S)/2：n^T S n 与 n^T diag(S) 同奇偶，
    这样 theta 值本身不变 (否则会变成带特征的 theta)。
    """
    S = np.asarray(S)
    if S.shape != (tau.g, tau.g) or not np.array_equal(S, S.T) or not np.array_equal(S, np.round(S)):
        raise InvalidSpec("平移矩阵 S 必须是整数对称矩阵", shape=list(S.shape))
    z = np.asarray(z, dtype=complex)
    return validate_period(tau.tau + S), z - 0.5 * np.diag(S)


def invert(tau: PeriodMatrix, z: Sequence[complex]) -> Tuple[PeriodMatrix, np.ndarray]:
    """(tau, z) -> (-tau^{-1}, tau^{-1} z)。"""
    inv = np.linalg.inv(tau.tau)
    z = np.asarray(z, dtype=complex)
    return validate_period(-inv), inv @ z
