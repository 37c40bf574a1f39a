# theta/riemann.py

"""
黎曼 theta 函数及其范数 ||theta||。

截断: 对 Q = pi Im(tau) 的椭球求和，尾项用高斯尾估计
    sum_{|v|_Q^2 > R^2} exp(-|v|_Q^2) <= exp(-R^2/2) * (1 + sqrt(2 pi / lambda_min))^g
给出可证的上界。||theta|| 一律走 (a, b) 级数并在对数空间求和，避免大 Im(tau) 下的溢出。
"""

import logging
import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from core import config as config_module
from core.errors import InvalidSpec, TruncationFailure
from lattice.enumeration import covering_box, covering_radius_sq, enumerate_ellipsoid
from lattice.gram import GramLattice
from lattice.tropical import tropical_theta_norm
from theta.period import PeriodMatrix, RealPairPoint

logger = logging.getLogger(__name__)

# 向量化求值时每块 (样本数 x 候选整点数) 的上限
_MAX_BATCH_ENTRIES = 2 ** 21


@dataclass(frozen=True)
class ThetaEvaluation:
    value: complex
    tail_bound: float
    terms_used: int


def _gaussian_constant(Q: np.ndarray) -> float:
    """log((1 + sqrt(2 pi / lambda_min))^g)。"""
    lam_min = float(np.linalg.eigvalsh(Q)[0])
    return Q.shape[0] * math.log1p(math.sqrt(2 * math.pi / lam_min))


def _check_budget(Q: np.ndarray, radius_sq: float, budget: int) -> None:
    # 椭球体积给出格点数的估计，明显超出预算时不必开始枚举
    g = Q.shape[0]
    log_volume = (g / 2) * math.log(math.pi) - gammaln(g / 2 + 1) + (g / 2) * math.log(max(radius_sq, 1e-300)) \
        - 0.5 * float(np.linalg.slogdet(Q)[1])
    if log_volume > math.log(budget):
        raise TruncationFailure(
            f"截断半径过大: 预计约 {math.exp(min(log_volume, 700)):.3g} 项，超过上限 {budget}",
            radius_sq=radius_sq,
            budget=budget,
        )


def _check_eps(eps: float) -> None:
    if not eps > 0:
        raise InvalidSpec(f"eps 必须为正数，收到 {eps}")


def riemann_theta(tau: PeriodMatrix, z: Sequence[complex], eps: float | None = None) -> ThetaEvaluation:
    """theta(tau, z) = sum_n exp(pi i n^T tau n + 2 pi i n^T z)，误差 <= tail_bound <= eps。"""
    current_config = config_module.get_current_config()
    eps = current_config["THETA_EPS"] if eps is None else eps
    _check_eps(eps)
    z = np.asarray(z, dtype=complex).reshape(tau.g)
    Y = tau.imag
    Q = math.pi * Y
    c = np.linalg.solve(Y, z.imag)
    # |term_n| = exp(pi c^T Y c) * exp(-(n+c)^T Q (n+c))
    log_scale = math.pi * float(c @ Y @ c)
    log_const = log_scale + _gaussian_constant(Q)
    radius_sq = max(0.0, 2 * (log_const - math.log(eps)))

    budget = current_config["THETA_TERM_BUDGET"]
    _check_budget(Q, radius_sq, budget)
    N = enumerate_ellipsoid(Q, -c, radius_sq, budget=budget)
    exponents = 1j * math.pi * np.einsum("ki,ij,kj->k", N, tau.tau, N) + 2j * math.pi * (N @ z)
    value = complex(np.exp(exponents).sum())
    tail = math.exp(log_const - radius_sq / 2)
    logger.debug(f"theta 求和: {len(N)} 项, 尾项上界 {tail:.3g}")
    return ThetaEvaluation(value, tail, len(N))


def _pair_exponents(tau: PeriodMatrix, a: np.ndarray, b: np.ndarray, N: np.ndarray) -> np.ndarray:
    V = N + b
    return 1j * math.pi * np.einsum("ki,ij,kj->k", V, tau.tau, V) + 2j * math.pi * (N @ a)


def log_theta_sum(tau: PeriodMatrix, point: RealPairPoint, eps: float | None = None,
                  log_shift: float = 0.0) -> Tuple[float, float, int]:
    """
    log|sum_n exp(pi i (n+b)^T tau (n+b) + 2 pi i n^T a)| + log_shift，以及相对尾项上界与项数。

    求和半径取 2 m + 2 log(C/eps)，其中 m 为主导项的指数 (由最近向量给出)，
    因此尾项相对于主导项的大小不超过 eps。
    """
    current_config = config_module.get_current_config()
    eps = current_config["THETA_EPS"] if eps is None else eps
    _check_eps(eps)
    p = point.reduced()
    Q = math.pi * tau.imag
    lattice = GramLattice(tau.g, tuple(tuple(float(v) for v in row) for row in Q), False)
    m = 2 * float(tropical_theta_norm(lattice, p.b).value)
    radius_sq = 2 * m + 2 * (_gaussian_constant(Q) - math.log(eps))

    budget = current_config["THETA_TERM_BUDGET"]
    _check_budget(Q, radius_sq, budget)
    N = enumerate_ellipsoid(Q, -p.b, radius_sq, budget=budget)
    E = _pair_exponents(tau, p.a, p.b, N)
    # log|sum exp(E)|，按最大实部归一
    top = float(E.real.max())
    total = np.exp(E - top).sum()
    magnitude = abs(total)
    log_value = -math.inf if magnitude == 0 else top + math.log(magnitude)
    return log_value + log_shift, eps, len(N)


def log_theta_norm(tau: PeriodMatrix, point: RealPairPoint, eps: float | None = None) -> float:
    """log ||theta||(tau, a + tau b)。"""
    _, logdet = np.linalg.slogdet(tau.imag)
    value, _, _ = log_theta_sum(tau, point, eps, log_shift=0.25 * float(logdet))
    return value


def theta_norm(tau: PeriodMatrix, point: RealPairPoint, eps: float | None = None) -> float:
    """||theta||(tau, z) = det(Im tau)^{1/4} exp(-pi y^T Y^{-1} y) |theta(tau, z)|，经 (a, b) 级数计算。"""
    value = log_theta_norm(tau, point, eps)
    return 0.0 if value == -math.inf else math.exp(value)


def theta_norm_at(tau: PeriodMatrix, z: Sequence[complex], eps: float | None = None) -> float:
    return theta_norm(tau, tau.pair_of(z), eps)


class BatchThetaNorm:
    """
    对 [0,1)^{2g} 中的一批 (a, b) 向量化计算 log ||theta||。

    候选整点对所有 b in [0,1)^g 一次性给出:
    半径平方取 2 * 覆盖半径上界 + 2 log(C/eps)，对每个样本都不小于其自身所需半径。
    """

    def __init__(self, tau: PeriodMatrix, eps: float | None = None):
        current_config = config_module.get_current_config()
        eps = current_config["THETA_EPS"] if eps is None else eps
        _check_eps(eps)
        self.tau = tau
        Q = math.pi * tau.imag
        radius_sq = 2 * covering_radius_sq(Q) + 2 * (_gaussian_constant(Q) - math.log(eps))
        self.candidates = covering_box(Q, radius_sq)
        budget = current_config["THETA_TERM_BUDGET"]
        if len(self.candidates) > budget:
            raise TruncationFailure(
                f"向量化求值的候选整点 {len(self.candidates)} 个，超过上限 {budget}",
                budget=budget,
            )
        self.log_det_quarter = 0.25 * float(np.linalg.slogdet(tau.imag)[1])
        logger.debug(f"向量化 ||theta||: 亏格 {tau.g}, 候选整点 {len(self.candidates)} 个")

    def __call__(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        A = np.atleast_2d(A)
        B = np.atleast_2d(B)
        rows = max(1, _MAX_BATCH_ENTRIES // len(self.candidates))
        return np.concatenate([self._evaluate(A[s:s + rows], B[s:s + rows]) for s in range(0, A.shape[0], rows)])

    def _evaluate(self, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        N = self.candidates
        V = B[:, None, :] + N[None, :, :]                      # (S, K, g)
        quad = np.einsum("ski,ij,skj->sk", V, self.tau.tau, V)
        E = 1j * math.pi * quad + 2j * math.pi * (A @ N.T)      # (S, K)
        top = E.real.max(axis=1, keepdims=True)
        total = np.abs(np.exp(E - top).sum(axis=1))
        with np.errstate(divide="ignore"):
            return top[:, 0] + np.log(total) + self.log_det_quarter
