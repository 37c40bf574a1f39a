# degeneration/family.py

"""
退化周期族

    T_f(t) = [[ S1(s),   S3(s)                        ],
              [ S3(s)^T, (m log s)/(2 pi i) B + S2(s) ]],   s^m = t

以及截面 z(t) = a + T_f(t) b 的热带化。
内部使用 s = t^{1/m} (主值) 坐标，S 块是 s 的多项式；对外的参数一律是 t。
"""

import cmath
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import FrozenSet, Sequence, Tuple

import numpy as np

from core.errors import InvalidSpec, InvalidT, NotInSiegelSpace, NotSymmetric
from graph.jacobian import tropical_jacobian
from graph.metrized import genus_and_lengths
from lattice.gram import GramLattice, TorusCoordinate, symmetric_pivots, validate_gram
from lattice.tropical import tropical_theta_norm
from theta.period import PeriodMatrix, validate_period

logger = logging.getLogger(__name__)


def _poly_eval(coeffs: np.ndarray, s: complex) -> np.ndarray:
    """coeffs 形状为 (次数+1, 行, 列)，按 Horner 格式求值。"""
    value = np.zeros(coeffs.shape[1:], dtype=complex)
    for c in coeffs[::-1]:
        value = value * s + c
    return value


@dataclass(frozen=True, eq=False)
class PeriodFamily:
    g1: int
    g2: int
    m: int
    B: GramLattice
    S1: np.ndarray
    S2: np.ndarray
    S3: np.ndarray
    name: str = field(default="")

    @property
    def g(self) -> int:
        return self.g1 + self.g2

    def blocks_at(self, s: complex) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _poly_eval(self.S1, s), _poly_eval(self.S2, s), _poly_eval(self.S3, s)

    @property
    def S1_zero(self) -> np.ndarray:
        return self.S1[0]

    @property
    def S2_zero(self) -> np.ndarray:
        return self.S2[0]

    @property
    def S3_zero(self) -> np.ndarray:
        return self.S3[0]


@dataclass(frozen=True, eq=False)
class SectionSpec:
    """多值截面 z(t) = a + T_f(t) b；b = (b1, b2) 按 (g1, g2) 拆分。"""
    a: Tuple
    b: Tuple

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise InvalidSpec(f"a 与 b 的长度不一致: {len(self.a)} vs {len(self.b)}")
        if not all(math.isfinite(float(v)) for v in (*self.a, *self.b)):
            raise InvalidSpec("截面 (a, b) 中含有非有限值")

    @property
    def a_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.a])

    @property
    def b_array(self) -> np.ndarray:
        return np.array([float(v) for v in self.b])

    def split(self, g1: int):
        return self.a[:g1], self.a[g1:], self.b[:g1], self.b[g1:]


@dataclass(frozen=True)
class TropicalSection:
    point: TorusCoordinate
    T: float | Fraction
    minimizers: FrozenSet[Tuple[int, ...]]


def _coeff_array(coeffs, rows: int, cols: int, label: str) -> np.ndarray:
    arr = np.asarray(coeffs, dtype=complex)
    if arr.size == 0 or rows * cols == 0:
        return np.zeros((1, rows, cols), dtype=complex)
    if arr.ndim == 2:
        arr = arr[None, :, :]
    if arr.ndim != 3 or arr.shape[1:] != (rows, cols):
        raise InvalidSpec(f"{label} 的系数形状应为 (次数+1, {rows}, {cols})，收到 {arr.shape}")
    return arr


def validate_family(g1: int, g2: int, m: int, B, S1=(), S2=(), S3=(), name: str = "") -> PeriodFamily:
    """
    构造并检查周期族。

    B 必须为对称正定 (有理数时精确检查)，S1(0) 属于 Siegel 上半空间，S2 的每个系数对称。
    S 块的系数以 (次数+1, 行, 列) 的嵌套列表给出；空列表表示零多项式。
    """
    if g1 < 0 or g2 < 0 or g1 + g2 < 1:
        raise InvalidSpec(f"需要 g1, g2 >= 0 且 g1 + g2 >= 1，收到 g1={g1}, g2={g2}", g1=g1, g2=g2)
    if m < 1:
        raise InvalidSpec(f"m 必须为正整数，收到 {m}", m=m)
    lattice = B if isinstance(B, GramLattice) else validate_gram(B)
    if lattice.rank != g2:
        raise InvalidSpec(f"B 的秩 {lattice.rank} 与 g2={g2} 不一致")

    S1 = _coeff_array(S1, g1, g1, "S1")
    S2 = _coeff_array(S2, g2, g2, "S2")
    S3 = _coeff_array(S3, g1, g2, "S3")
    for k, c in enumerate(S2):
        if np.abs(c - c.T).max(initial=0.0) > 1e-12 * max(1.0, np.abs(c).max(initial=0.0)):
            raise NotSymmetric(f"S2 的第 {k} 次系数不对称", degree=k)
    for k, c in enumerate(S1):
        if np.abs(c - c.T).max(initial=0.0) > 1e-12 * max(1.0, np.abs(c).max(initial=0.0)):
            raise NotSymmetric(f"S1 的第 {k} 次系数不对称", degree=k)
    if g1 > 0:
        for k, pivot in enumerate(symmetric_pivots(S1[0].imag.tolist())):
            if not pivot > 0:
                raise NotInSiegelSpace(f"Im S1(0) 不是正定的: 第 {k} 个主元为 {pivot:.6g}", pivot_index=k)
    return PeriodFamily(g1, g2, m, lattice, S1, S2, S3, name)


def _check_t(t: complex) -> complex:
    t = complex(t)
    r = abs(t)
    if not (math.isfinite(r) and 0 < r < 1):
        raise InvalidT(f"需要 0 < |t| < 1，收到 |t| = {r}", abs_t=r)
    return t


def log_block(fam: PeriodFamily, t: complex, branch: int = 0) -> np.ndarray:
    """(m log s)/(2 pi i) B，其中 log s = (Log|t| + i Arg t)/m + 2 pi i branch。"""
    t = _check_t(t)
    log_t = complex(math.log(abs(t)), cmath.phase(t))
    factor = log_t / (2j * math.pi) + fam.m * branch
    return factor * fam.B.matrix


def family_period(fam: PeriodFamily, t: complex, branch: int = 0) -> PeriodMatrix:
    t = _check_t(t)
    s = cmath.exp(complex(math.log(abs(t)), cmath.phase(t)) / fam.m)
    S1, S2, S3 = fam.blocks_at(s)
    g1, g2 = fam.g1, fam.g2
    tau = np.zeros((g1 + g2, g1 + g2), dtype=complex)
    tau[:g1, :g1] = S1
    tau[:g1, g1:] = S3
    tau[g1:, :g1] = S3.T
    tau[g1:, g1:] = log_block(fam, t, branch) + S2
    try:
        return validate_period(tau, max_genus=max(fam.g, 1))
    except NotInSiegelSpace as e:
        raise NotInSiegelSpace(
            f"|t| = {abs(t):.3g} 时 Im T_f(t) 不正定 (第 {e.pivot_index} 个主元)，t 过大",
            pivot_index=e.pivot_index,
            abs_t=abs(t),
        ) from e


def family_trop(fam: PeriodFamily, section: SectionSpec) -> TropicalSection:
    """trop(z) = b2 mod 1 (格基坐标)，T = ||Psi_B||(trop z)，以及相对约化点的全部极小点。"""
    _, _, _, b2 = section.split(fam.g1)
    point = TorusCoordinate.reduce(b2)
    value, minimizers = tropical_theta_norm(fam.B, point)
    return TropicalSection(point, value, minimizers)


def rebase_family(fam: PeriodFamily, R2: Sequence[Sequence[int]]) -> PeriodFamily:
    """
    以 diag(I, R2) 更换基底: B' = R2^T B R2, S2' = R2^T S2 R2, S3' = S3 R2。
    R2 必须是幺模整数矩阵。
    """
    R = np.asarray(R2)
    if R.shape != (fam.g2, fam.g2) or not np.array_equal(R, np.round(R)) or round(abs(np.linalg.det(R))) != 1:
        raise InvalidSpec("R2 必须是 g2 x g2 的幺模整数矩阵", shape=list(R.shape))
    Rf = R.astype(float)
    S2 = np.einsum("ji,djk,kl->dil", Rf, fam.S2, Rf)
    S3 = np.einsum("dij,jk->dik", fam.S3, Rf)
    return PeriodFamily(fam.g1, fam.g2, fam.m, fam.B.transformed(R.astype(int).tolist()), fam.S1, S2, S3,
                        f"{fam.name} (rebased)".strip())


def family_from_graph(graph, polarization) -> PeriodFamily:
    """
    由极化度量图构造周期族: g2 = g0, B = 热带 Jacobian 的 Gram 矩阵,
    g1 = g - g0 且 S1 = i Id, m = 1, S2 = S3 = 0。
    """
    g, g0, _ = genus_and_lengths(graph, polarization)
    gram, _ = tropical_jacobian(graph)
    g1 = g - g0
    S1 = [1j * np.eye(g1)] if g1 > 0 else []
    return validate_family(g1, g0, 1, gram, S1=S1, name=f"family of {graph.name or 'graph'}")
