# bounds/curve.py

"""
曲线 X / K 的算术数据与 delta(X)、phi(X) 的汇总:

    delta(X) = sum_v (delta(Gamma_v) + epsilon(Gamma_v)) log N(v) + sum_sigma (delta(X_sigma) - 4g log 2pi)
    phi(X)   = sum_v phi(Gamma_v) log N(v) + sum_sigma phi(X_sigma)

有限位的约化图要么给出图 (交给 graph 模块计算)，要么直接给出 (delta, epsilon, phi)。
无穷位的 delta、phi 只作为输入，不在这里计算。
"""

import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from core.errors import InvalidSpec, MissingPlaceData
from graph.metrized import MetrizedGraph, Polarization
from graph.potential import graph_invariants

logger = logging.getLogger(__name__)

LOG_TWO_PI = math.log(2 * math.pi)


@dataclass(frozen=True)
class PlaceInvariants:
    delta: float
    epsilon: float
    phi: float


@dataclass(frozen=True)
class FinitePlace:
    norm: int
    graph: Optional[MetrizedGraph] = None
    polarization: Optional[Polarization] = None
    invariants: Optional[PlaceInvariants] = None
    label: str = ""


@dataclass(frozen=True)
class InfinitePlace:
    delta: Optional[float] = None
    phi: Optional[float] = None
    label: str = ""


@dataclass(frozen=True)
class CurveArithmeticData:
    g: int
    d_K: int
    omega_sq: float
    h_fal: float
    finite_places: List[FinitePlace] = field(default_factory=list)
    infinite_places: List[InfinitePlace] = field(default_factory=list)
    name: str = ""


def validate_curve(g: int, d_K: int, omega_sq: float, h_fal: float, finite_places=(), infinite_places=(),
                   name: str = "") -> CurveArithmeticData:
    if g < 2:
        raise InvalidSpec(f"曲线亏格必须 >= 2，收到 g = {g}", g=g)
    if d_K < 1:
        raise InvalidSpec(f"d_K 必须是正整数，收到 {d_K}", d_K=d_K)
    if omega_sq < 0:
        raise InvalidSpec(f"omega^2 必须非负，收到 {omega_sq}", omega_sq=omega_sq)
    for k, place in enumerate(finite_places):
        if place.norm < 2:
            raise InvalidSpec(f"第 {k} 个有限位的范数 N(v) 必须 >= 2，收到 {place.norm}", place=k)
    return CurveArithmeticData(g, d_K, omega_sq, h_fal, list(finite_places), list(infinite_places), name)


def resolve_place(place: FinitePlace, index: int, subdivisions: int | None = None) -> PlaceInvariants:
    if place.invariants is not None:
        return place.invariants
    if place.graph is None or place.polarization is None:
        raise MissingPlaceData(f"第 {index} 个有限位既没有约化图也没有 (delta, epsilon, phi)", place=index)
    inv = graph_invariants(place.graph, place.polarization, subdivisions)
    return PlaceInvariants(inv.delta, inv.epsilon, inv.phi)


def aggregate(data: CurveArithmeticData, subdivisions: int | None = None) -> Tuple[float, float]:
    """返回 (delta(X), phi(X))。没有任何位时为 (0, 0)。"""
    delta_X = 0.0
    phi_X = 0.0
    for k, place in enumerate(data.finite_places):
        inv = resolve_place(place, k, subdivisions)
        weight = math.log(place.norm)
        delta_X += (inv.delta + inv.epsilon) * weight
        phi_X += inv.phi * weight
        logger.debug(f"有限位 {place.label or k}: N = {place.norm}, delta = {inv.delta:.6g}, phi = {inv.phi:.6g}")

    for k, place in enumerate(data.infinite_places):
        if place.delta is None or place.phi is None:
            raise MissingPlaceData(f"第 {k} 个无穷位缺少 delta 或 phi", place=k)
        delta_X += place.delta - 4 * data.g * LOG_TWO_PI
        phi_X += place.phi
    return delta_X, phi_X


def noether_residual(data: CurveArithmeticData, subdivisions: int | None = None) -> float:
    """12 d_K h_Fal - omega^2 - delta(X)，数据满足 Noether 公式时为 0。"""
    delta_X, _ = aggregate(data, subdivisions)
    return 12 * data.d_K * data.h_fal - data.omega_sq - delta_X
