# bounds/tautological.py

"""
Jacobian 中重言式循环 Z_{m,alpha} 的 Neron-Tate 高度下界。

记 S = sum m_j^2，X = sum_{j<k} m_j m_k。g = 2 时所有含 X 的分式按约定取 0。
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from bounds.coefficients import (BOGOMOLOV_LABEL, BoundReport, Number, omega_coefficient, omega_phi_constant,
                                 require_genus)
from core.errors import InvalidSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TautologicalSpec:
    r: int
    m: Tuple[int, ...]


@dataclass(frozen=True)
class MEstimates:
    sum_cross: int
    upper: Fraction
    lower: Fraction
    both_hold: bool


def validate_tautological(g: int, r: int, m: Sequence[int]) -> TautologicalSpec:
    if not 1 <= r <= g - 1:
        raise InvalidSpec(f"需要 1 <= r <= g-1，收到 r = {r}, g = {g}", r=r, g=g)
    if len(m) != r:
        raise InvalidSpec(f"m 的长度 {len(m)} 与 r = {r} 不一致", r=r)
    if any(int(v) != v for v in m) or any(v == 0 for v in m):
        raise InvalidSpec(f"m 的分量必须是非零整数: {list(m)}")
    return TautologicalSpec(r, tuple(int(v) for v in m))


def cross_sum(m: Sequence[int]) -> int:
    total = sum(m)
    return (total * total - sum(v * v for v in m)) // 2


def m_vector_estimates(m: Sequence[int]) -> MEstimates:
    """-1/2 S <= X <= (r-1)/2 S。"""
    if not m:
        raise InvalidSpec("m 不能为空")
    squares = sum(v * v for v in m)
    cross = cross_sum(m)
    upper = Fraction(len(m) - 1, 2) * squares
    lower = Fraction(-squares, 2)
    return MEstimates(cross, upper, lower, lower <= cross <= upper)


def _cross_fractions(g: int) -> Tuple[Fraction, Fraction]:
    """(2g+1)/(6g(g-1)^2(g-2)) 与 1/(3g(g-1)(g-2))，g = 2 时为 0。"""
    if g == 2:
        return Fraction(0), Fraction(0)
    return Fraction(2 * g + 1, 6 * g * (g - 1) ** 2 * (g - 2)), Fraction(1, 3 * g * (g - 1) * (g - 2))


def height_bracket(g: int, m: Sequence[int], omega_sq: Number, phi_X: Number) -> Number:
    """(S/(4(g-1)^2) - (2g+1) X/(6g(g-1)^2(g-2))) omega^2 + X/(3g(g-1)(g-2)) phi。"""
    squares = sum(v * v for v in m)
    cross = cross_sum(m)
    a, b = _cross_fractions(g)
    return (Fraction(squares, 4 * (g - 1) ** 2) - a * cross) * omega_sq + b * cross * phi_X


def case_analysis(g: int, m: Sequence[int], omega_sq: Number, phi_X: Number) -> Tuple[str, List[Tuple[str, Number]]]:
    """
    证明中的分情形估计，返回 (情形, 依次递减的中间量)。
    末项恒为 r/(12g(g-1)) omega^2。
    """
    r = len(m)
    squares = sum(v * v for v in m)
    cross = cross_sum(m)
    final = Fraction(r, 12 * g * (g - 1)) * omega_sq
    bracket = height_bracket(g, m, omega_sq, phi_X)
    if g == 2:
        return "g=2", [("bracket", bracket), ("squares_term", Fraction(squares, 4 * (g - 1) ** 2) * omega_sq),
                       ("final", final)]
    if cross >= 0:
        middle = Fraction(3 * g * (g - 2) - (2 * g + 1) * (r - 1), 12 * g * (g - 1) ** 2 * (g - 2)) * squares * omega_sq
        return "i", [("bracket", bracket), ("after_upper_estimate", middle), ("final", final)]
    first = (Fraction(squares, 4 * (g - 1) ** 2) + Fraction(2 * g + 1, 6 * g * (g - 1) ** 2 * (g - 2)) * cross) * omega_sq
    second = Fraction(3 * g * (g - 2) - (2 * g + 1), 12 * g * (g - 1) ** 2 * (g - 2)) * squares * omega_sq
    return "ii", [("bracket", bracket), ("after_omega_phi", first), ("after_lower_estimate", second), ("final", final)]


def corollary_coefficient(g: int) -> Fraction:
    """(g-1)^3 / (24 (47g^4+42g^3+18g^2+g))。"""
    require_genus(g)
    return Fraction((g - 1) ** 3, 24 * (47 * g ** 4 + 42 * g ** 3 + 18 * g ** 2 + g))


def tautological_height_bound(g: int, spec: TautologicalSpec, d_K: int, omega_sq: Number, phi_X: Number,
                              h_fal: Optional[Number] = None, c1: Optional[Number] = None,
                              c2: Optional[Number] = None) -> BoundReport:
    """
    三个下界:
    - 依赖 m 的界 (g-r)/(2 d_K) * bracket；
    - 与 m 无关的界 (g-r) r / (24 d_K g (g-1)) * omega^2；
    - 推论形式 coef * max(12 h_Fal + c1, c2) (给出 h_Fal, c1, c2 时)，并分别给出两个分支。
    """
    require_genus(g)
    spec = validate_tautological(g, spec.r, spec.m)
    r = spec.r
    bracket = height_bracket(g, spec.m, omega_sq, phi_X)
    m_bound = Fraction(g - r, 2 * d_K) * bracket
    free_coefficient = Fraction((g - r) * r, 24 * d_K * g * (g - 1))
    free_bound = free_coefficient * omega_sq
    case, steps = case_analysis(g, spec.m, omega_sq, phi_X)

    components: Dict[str, Number] = {
        "m_dependent_bound": m_bound,
        "m_free_bound": free_bound,
        "m_free_coefficient": free_coefficient,
        "uniform_bound": Fraction(1, 24 * d_K * g) * omega_sq,
        "sum_squares": sum(v * v for v in spec.m),
        "sum_cross": cross_sum(spec.m),
    }
    components.update({f"case_{case}_{name}": value for name, value in steps})
    slacks = [(f"{a}>={b}", x - y) for (a, x), (b, y) in zip(steps, steps[1:])]
    slacks.append(("m_dependent>=m_free", m_bound - free_bound))
    slacks.append(("omega_phi_inequality", omega_phi_constant(g) * omega_sq - phi_X))

    coefficient = corollary_coefficient(g)
    bound_value: Number = free_bound
    branch = ""
    if h_fal is not None and c1 is not None and c2 is not None:
        height_branch = coefficient * (12 * h_fal + c1)
        constant_branch = coefficient * c2
        components["corollary_height_branch"] = height_branch
        components["corollary_constant_branch"] = constant_branch
        bound_value = max(height_branch, constant_branch)
        branch = "c1" if height_branch >= constant_branch else "c2"
        components["corollary_bound"] = bound_value
        slacks.append(("m_free>=corollary", free_bound - bound_value))
    components["omega_coefficient"] = omega_coefficient(g)
    logger.debug(f"重言式循环下界: g={g}, r={r}, 情形 {case}, m 无关下界 {float(free_bound):.6g}")
    return BoundReport(bound_value, coefficient, components, slacks, branch or case, BOGOMOLOV_LABEL)
