# degeneration/limits.py

"""
t -> 0 时的极限量:

- det Im T_f(t) / L^{g2} -> (1/2pi)^{g2} det Im S1(0) det B，L = -log|t|；
- (||theta||(T_f(t), z(t)) |t|^{-T} L^{-g2/4})^2 -> alpha(a, b)。

所有 |t| 的幂都在对数空间里处理。
"""

import cmath
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import FrozenSet, List, Sequence, Tuple

import numpy as np

from core.errors import InvalidGrid
from degeneration.family import PeriodFamily, SectionSpec, family_period, family_trop
from lattice.gram import symmetric_pivots
from theta.period import PeriodMatrix, RealPairPoint, validate_period
from theta.riemann import log_theta_norm, riemann_theta

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DetImProbe:
    t: complex
    L: float
    ratio: float
    log_form: float
    predicted: float


@dataclass(frozen=True)
class AlphaResult:
    alpha: float
    beta: complex
    T: float | Fraction
    minimizers: FrozenSet[Tuple[int, ...]]


@dataclass(frozen=True)
class ProbePoint:
    t: complex
    L: float
    log_norm: float
    normalized_value: float


def _det_B(fam: PeriodFamily) -> float:
    if fam.g2 == 0:
        return 1.0
    value = Fraction(1) if fam.B.exact else 1.0
    for p in symmetric_pivots(fam.B.gram):
        value *= p
    return float(value)


def _det_im_S1(fam: PeriodFamily) -> float:
    if fam.g1 == 0:
        return 1.0
    return float(np.linalg.det(fam.S1_zero.imag))


def det_im_limit(fam: PeriodFamily) -> float:
    """(1/2pi)^{g2} det Im S1(0) det B；g1 = 0 时 S1 的行列式取 1。"""
    return (1 / (2 * math.pi)) ** fam.g2 * _det_im_S1(fam) * _det_B(fam)


def det_im_probe(fam: PeriodFamily, t_values: Sequence[complex], branch: int = 0) -> List[DetImProbe]:
    """在给定 t 处的观测比值 det Im T_f(t) / L^{g2} / predicted 及对数形式 log det Im T_f(t) - g2 log L。"""
    predicted = det_im_limit(fam)
    probes = []
    for t in t_values:
        tau = family_period(fam, t, branch)
        L = -math.log(abs(t))
        _, logdet = np.linalg.slogdet(tau.imag)
        log_form = float(logdet) - fam.g2 * math.log(L)
        probes.append(DetImProbe(complex(t), L, math.exp(log_form - math.log(predicted)), log_form, predicted))
    return probes


def _e(x: complex) -> complex:
    return cmath.exp(2j * math.pi * x)


def alpha_of_section(fam: PeriodFamily, section: SectionSpec, eps: float | None = None) -> AlphaResult:
    """
    beta = sum_{n in N1} e(1/2 (b1^T S1(0) b1 + (n+b2)^T S2(0) (n+b2)) + b1^T S3(0) (n+b2) + n^T a2)
                         * theta(S1(0), a1 + S3(0)(n+b2) + S1(0) b1)
    alpha = sqrt(det Im S1(0) det B / (2pi)^{g2}) |beta|^2

    N1 为 b2 处 ||Psi_B|| 的全部极小点。
    """
    trop = family_trop(fam, section)
    g1 = fam.g1
    a = section.a_array
    b = section.b_array
    a1, a2, b1, b2 = a[:g1], a[g1:], b[:g1], b[g1:]
    shift = np.floor(b2)
    S1, S2, S3 = fam.S1_zero, fam.S2_zero, fam.S3_zero
    S1_period: PeriodMatrix | None = validate_period(S1, max_genus=g1) if g1 > 0 else None

    beta = 0j
    for n_reduced in sorted(trop.minimizers):
        # 极小点相对于约化后的 b2，还原到原始 b2
        n = np.array(n_reduced, dtype=float) - shift
        v = n + b2
        phase = 0.5 * (b1 @ S1 @ b1 + v @ S2 @ v) + b1 @ S3 @ v + n @ a2
        factor = _e(phase)
        if S1_period is not None:
            factor *= riemann_theta(S1_period, a1 + S3 @ v + S1 @ b1, eps).value
        beta += factor

    alpha = math.sqrt(det_im_limit(fam)) * abs(beta) ** 2
    logger.debug(f"alpha(a, b) = {alpha:.10g}, |N1| = {len(trop.minimizers)}")
    return AlphaResult(alpha, complex(beta), trop.T, trop.minimizers)


def theta_limit_probe(fam: PeriodFamily, section: SectionSpec, t_sequence: Sequence[complex],
                      branch: int = 0, eps: float | None = None) -> List[ProbePoint]:
    """
    (||theta||(T_f(t), a + T_f(t) b) |t|^{-T} L^{-g2/4})^2，在对数空间计算:
    2 (log||theta|| + T L - (g2/4) log L)。截面的 (a, b) 坐标与 t 无关。
    """
    abs_values = [abs(complex(t)) for t in t_sequence]
    if any(later >= earlier for earlier, later in zip(abs_values, abs_values[1:])):
        raise InvalidGrid("theta_limit_probe 要求 |t| 严格递减", abs_t=abs_values)
    T = float(family_trop(fam, section).T)
    point = RealPairPoint(section.a_array, section.b_array)
    probes = []
    for t in t_sequence:
        tau = family_period(fam, t, branch)
        L = -math.log(abs(t))
        log_norm = log_theta_norm(tau, point, eps)
        log_value = 2 * (log_norm + T * L - (fam.g2 / 4) * math.log(L))
        value = 0.0 if log_value == -math.inf else math.exp(log_value)
        probes.append(ProbePoint(complex(t), L, log_norm, value))
        logger.debug(f"|t| = {abs(t):.3g}: 归一化值 {value:.10g}")
    return probes
