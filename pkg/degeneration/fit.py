# degeneration/fit.py

"""
I(A_t) ~ c0 + c1 L - c2 log L (L = -log|t|) 的最小二乘拟合，
与热带矩 I(Sigma_f) 和 g2/2 的预测值比较。

I(A_t) 与渐近式之差是 |t|^lambda 量级的项 (Tate 族中恰为 -2 sum_k log(1 - |t|^k))。
默认在设计矩阵中加入一列 (|t| / |t|_max)^lambda，
lambda 取 B 的最短非零向量范数；S 块含 s 的高次项时再与 1/m 取较小者。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Sequence

import numpy as np

from core import config as config_module
from core.errors import IllConditionedFit, InvalidGrid
from degeneration.family import PeriodFamily, family_period
from lattice.enumeration import minimum_norm
from lattice.moment import tropical_moment
from theta.invariant import MONTE_CARLO, InvariantEstimate, abelian_invariant

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("abs_t", "L", "I_estimate", "I_stderr", "model_value", "residual")


@dataclass(frozen=True)
class FitRow:
    abs_t: float
    L: float
    I_estimate: float
    I_stderr: float
    model_value: float
    residual: float


@dataclass(frozen=True)
class FitResult:
    """c3 是修正列的系数，即修正项在网格最大 |t| 处的取值；不加修正时 c3 与 correction_exponent 为 None。"""
    c0: float
    c1: float
    c2: float
    predicted_c1: float
    predicted_c2: float
    condition_number: float
    rows: List[FitRow]
    c3: float | None = None
    correction_exponent: float | None = None

    @property
    def residuals(self) -> List[float]:
        return [row.residual for row in self.rows]


def point_seed(seed: int, index: int) -> int:
    """网格第 index 个点的种子，只依赖 (seed, index)。"""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def _check_grid(abs_values: Sequence[float], parameters: int) -> None:
    current_config = config_module.get_current_config()
    min_points = max(current_config["FIT_MIN_POINTS"], parameters + 1)
    min_decades = current_config["FIT_MIN_DECADES"]
    if len(abs_values) < min_points:
        raise InvalidGrid(f"拟合至少需要 {min_points} 个网格点，收到 {len(abs_values)}", points=len(abs_values))
    if any(not (0 < v < 1) for v in abs_values):
        raise InvalidGrid("网格中的 |t| 必须位于 (0, 1)", abs_t=list(abs_values))
    decades = math.log10(max(abs_values)) - math.log10(min(abs_values))
    if decades < min_decades:
        raise InvalidGrid(
            f"网格只跨越 {decades:.2f} 个数量级，至少需要 {min_decades}",
            decades=decades,
        )


def correction_exponent(fam: PeriodFamily) -> float:
    """修正项 |t|^lambda 的指数。"""
    exponent = minimum_norm(fam.B.matrix)
    if any(np.any(block[1:] != 0) for block in (fam.S1, fam.S2, fam.S3)):
        exponent = min(exponent, 1 / fam.m)
    return exponent


def design_matrix(L: np.ndarray, exponent: float | None = None) -> np.ndarray:
    columns = [np.ones_like(L), L, -np.log(L)]
    if exponent is not None:
        columns.append(np.exp(-exponent * (L - L.min())))
    return np.column_stack(columns)


def invariant_asymptotic_fit(fam: PeriodFamily, t_grid: Sequence[complex], integrator: str = MONTE_CARLO,
                             samples: int | None = None, seed: int | None = None, workers: int | None = None,
                             branch: int = 0, moment_method: str | None = None,
                             moment_resolution: int | None = None, correction: bool | None = None) -> FitResult:
    """
    对每个 t 计算 I(A_t) 并做普通最小二乘。

    correction=False 时是三参数模型 c0 + c1 L - c2 log L；默认 (配置 FIT_EXPONENTIAL_CORRECTION)
    再加一列 |t|^lambda 的修正。c2 始终是拟合值，不做约束。
    每个网格点使用由 (seed, 下标) 派生的种子，结果与计算顺序及线程数无关。
    """
    current_config = config_module.get_current_config()
    seed = current_config["DEFAULT_SEED"] if seed is None else seed
    workers = current_config["FIT_WORKERS"] if workers is None else workers
    correction = current_config["FIT_EXPONENTIAL_CORRECTION"] if correction is None else correction
    exponent = correction_exponent(fam) if correction and fam.g2 > 0 else None
    abs_values = [abs(complex(t)) for t in t_grid]
    _check_grid(abs_values, 3 if exponent is None else 4)

    L = np.array([-math.log(v) for v in abs_values])
    X = design_matrix(L, exponent)
    condition = float(np.linalg.cond(X))
    max_condition = current_config["FIT_MAX_CONDITION"]
    if not condition <= max_condition:
        raise IllConditionedFit(f"设计矩阵的条件数 {condition:.3g} 超过 {max_condition:.1g}，网格过窄",
                                condition_number=condition)

    logger.info(f"🚀 开始渐近拟合: {len(abs_values)} 个网格点, 积分方法 {integrator}, 线程数 {workers}")
    if exponent is not None:
        logger.info(f"修正项 |t|^{exponent:.4g} 加入设计矩阵")

    def evaluate(index: int) -> InvariantEstimate:
        tau = family_period(fam, t_grid[index], branch)
        estimate = abelian_invariant(tau, integrator, samples, point_seed(seed, index))
        logger.info(f"网格点 {index + 1}/{len(abs_values)}: |t| = {abs_values[index]:.3g}, I = {estimate.I:.6f}")
        return estimate

    indices = range(len(abs_values))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            estimates = list(executor.map(evaluate, indices))
    else:
        estimates = [evaluate(i) for i in indices]

    y = np.array([e.I for e in estimates])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    model = X @ coef
    rows = [
        FitRow(abs_values[i], float(L[i]), float(y[i]), estimates[i].stderr, float(model[i]), float(y[i] - model[i]))
        for i in indices
    ]
    predicted_c1 = tropical_moment(fam.B, moment_method, moment_resolution).estimate
    result = FitResult(
        float(coef[0]), float(coef[1]), float(coef[2]), predicted_c1, fam.g2 / 2, condition, rows,
        c3=None if exponent is None else float(coef[3]),
        correction_exponent=exponent,
    )
    logger.info(f"✅ 拟合完成: c1 = {result.c1:.6f} (预测 {predicted_c1:.6f}), c2 = {result.c2:.4f} (预测 {fam.g2 / 2})")
    return result
