# bounds/coefficients.py

"""
phi 与 omega^2 的下界。系数一律用 Fraction 精确计算，只在输出报告时转成浮点数。

    phi(M)   >= (g-1)^2 / (23g^2+11g+2) * max(delta(M) + c1, c2)
    phi(X)   >= (g-1)^2 / (23g^2+11g+2) * max(delta(X) + d_K c1, d_K c2)
    omega^2  >= d_K (g-1)^3 / (47g^3+42g^2+18g+1) * max(12 h_Fal + c1, c2)

c1(g), c2(g) 只存在性已知，必须由调用方给出。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

from core.errors import GenusTooSmall

logger = logging.getLogger(__name__)

Number = Union[int, Fraction, float]

BOGOMOLOV_LABEL = "e'_L >= h'_L"


@dataclass(frozen=True)
class BoundReport:
    bound_value: Number
    coefficient: Fraction
    components: Dict[str, Number] = field(default_factory=dict)
    inequality_slacks: List[Tuple[str, Number]] = field(default_factory=list)
    branch: str = ""
    label: str = ""


def require_genus(g: int) -> None:
    if g < 2:
        raise GenusTooSmall(f"该下界只对 g >= 2 成立，收到 g = {g}", g=g)


def phi_coefficient(g: int) -> Fraction:
    require_genus(g)
    return Fraction((g - 1) ** 2, 23 * g * g + 11 * g + 2)


def omega_coefficient(g: int) -> Fraction:
    require_genus(g)
    return Fraction((g - 1) ** 3, 47 * g ** 3 + 42 * g ** 2 + 18 * g + 1)


def chain_constant(g: int) -> Fraction:
    """(23g^2+11g+2)/(g-1)^2，即 phi 系数的倒数。"""
    return 1 / phi_coefficient(g)


def omega_phi_constant(g: int) -> Fraction:
    """(2g+1)/(g-1)：omega^2 与 phi 之间的不等式 (2g+1)/(g-1) omega^2 >= phi。"""
    require_genus(g)
    return Fraction(2 * g + 1, g - 1)


def _max_branch(first: Number, second: Number) -> Tuple[Number, str]:
    # 相等时取第一个分支
    return (first, "c1") if first >= second else (second, "c2")


def phi_lower_bound(g: int, delta: Number, c1: Number, c2: Number, arithmetic: bool = False,
                    d_K: int = 1) -> BoundReport:
    """几何形式 (单个黎曼面) 或算术形式 (d_K 缩放常数)。"""
    coefficient = phi_coefficient(g)
    scale = d_K if arithmetic else 1
    value, branch = _max_branch(delta + scale * c1, scale * c2)
    components = {"delta_plus_c1": delta + scale * c1, "c2": scale * c2}
    return BoundReport(coefficient * value, coefficient, components, [], branch, "phi lower bound")


def omega_lower_bound(g: int, d_K: int, h_fal: Number, c1: Number, c2: Number,
                      delta_X: Optional[Number] = None, phi_X: Optional[Number] = None,
                      omega_sq: Optional[Number] = None) -> BoundReport:
    """
    omega^2 >= d_K * coef * max(12 h_Fal + c1, c2)。

    给出曲线数据 (delta_X, phi_X, omega_sq) 时，报告还包含证明中的不等式链
        C4 omega^2 >= omega^2 + C3 phi(X) >= max(omega^2 + delta(X) + d_K c1, omega^2 + d_K c2)
                   >= d_K max(12 h_Fal + c1, c2)
    的各项取值与相邻项之差。
    """
    coefficient = omega_coefficient(g)
    value, branch = _max_branch(12 * h_fal + c1, c2)
    bound = d_K * coefficient * value
    components: Dict[str, Number] = {"12h_fal_plus_c1": 12 * h_fal + c1, "c2": c2}
    slacks: List[Tuple[str, Number]] = []

    if delta_X is not None and phi_X is not None and omega_sq is not None:
        C3 = chain_constant(g)
        C4 = 1 / coefficient
        chain = [
            ("C4_omega_sq", C4 * omega_sq),
            ("omega_sq_plus_C3_phi", omega_sq + C3 * phi_X),
            ("max_omega_delta_branch", max(omega_sq + delta_X + d_K * c1, omega_sq + d_K * c2)),
            ("dK_max_height_branch", d_K * value),
        ]
        components.update(chain)
        slacks.extend((f"{a}>={b}", x - y) for (a, x), (b, y) in zip(chain, chain[1:]))
        phi_bound = phi_lower_bound(g, delta_X, c1, c2, arithmetic=True, d_K=d_K)
        slacks.append(("phi_arithmetic_bound", phi_X - phi_bound.bound_value))
        slacks.append(("omega_phi_inequality", omega_phi_constant(g) * omega_sq - phi_X))
        slacks.append(("omega_sq_bound", omega_sq - bound))
    logger.debug(f"omega^2 下界: 系数 {coefficient}, 分支 {branch}, 值 {float(bound):.6g}")
    return BoundReport(bound, coefficient, components, slacks, branch, "omega^2 lower bound")
