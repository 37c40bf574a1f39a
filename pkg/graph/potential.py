# graph/potential.py

"""
Zhang 测度、Green 函数与不变量 epsilon, phi, tau。

Green 函数按剖分计算: 每条边等分为 N 段，mu 的连续部分按梯形规则集中到节点上，
在离散网络上解 L g(x, .) = delta_x - mu 并做 mu-归一化。
两级 (N 与 2N) Richardson 外推消去 O(h^2) 误差。
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np

from core import config as config_module
from core.errors import GenusZero, InvalidSpec, MeasureNormalizationError
from graph.jacobian import tropical_jacobian
from graph.metrized import MetrizedGraph, Polarization, genus_and_lengths
from graph.resistance import Segment, edge_complement_resistance, grounded_inverse, laplacian_matrix
from lattice.moment import tropical_moment

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ZhangMeasure:
    atoms: Dict[str, float]
    densities: Dict[int, float]

    def total_mass(self, graph: MetrizedGraph) -> float:
        return math.fsum(self.atoms.values()) + math.fsum(
            self.densities[k] * float(e.length) for k, e in enumerate(graph.edges)
        )


@dataclass(frozen=True)
class DiscreteGreen:
    """剖分网络上的离散 Green 函数。nodes[i] 为顶点 id 或 (边下标, 到起点的距离)。"""
    nodes: List
    masses: np.ndarray
    laplacian: np.ndarray
    matrix: np.ndarray

    @property
    def diagonal(self) -> np.ndarray:
        return np.diag(self.matrix)


@dataclass(frozen=True)
class GreenDiagonal:
    nodes: List
    values: np.ndarray
    subdivisions: int
    extrapolated: bool


@dataclass(frozen=True)
class GraphInvariants:
    g: int
    g0: int
    delta: float
    epsilon: float
    phi: float
    tau: float
    I_jac: float
    I_jac_error: float

    def as_tuple(self) -> Tuple[float, float, float, float, float]:
        return self.delta, self.epsilon, self.phi, self.tau, self.I_jac


def _require_genus(graph: MetrizedGraph, polarization: Polarization) -> Tuple[int, int, float]:
    g, g0, delta = genus_and_lengths(graph, polarization)
    if g < 1:
        raise GenusZero("亏格为 0 时 Zhang 测度没有定义", g=g)
    return g, g0, delta


def zhang_measure(graph: MetrizedGraph, polarization: Polarization) -> ZhangMeasure:
    """
    mu = (1/2g) (delta_K - delta_Kcan) + sum_e 1/(g (r(e) + l(e))) dx|_e。

    delta_K - delta_Kcan = sum_p q_p p；桥的 r(e) 为无穷，密度取 0。
    """
    g, _, _ = _require_genus(graph, polarization)
    atoms = {v: polarization[v] / (2 * g) for v in graph.vertices}
    densities = {}
    for k, e in enumerate(graph.edges):
        r = edge_complement_resistance(graph, k)
        densities[k] = 0.0 if math.isinf(r) else 1.0 / (g * (r + float(e.length)))
    mu = ZhangMeasure(atoms, densities)

    mass = mu.total_mass(graph)
    tol = config_module.get_current_config()["MEASURE_MASS_TOL"]
    if abs(mass - 1) > tol:
        raise MeasureNormalizationError(f"Zhang 测度的总质量为 {mass:.15g}，偏离 1 超过 {tol}", mass=mass)
    return mu


def _subdivide(graph: MetrizedGraph, subdivisions: int) -> Tuple[List, List[Segment], List[Tuple[int, int, int]]]:
    """返回 (节点描述, 线段, 每条线段的端点与所属边下标)。"""
    index = graph.index
    nodes: List = list(graph.vertices)
    segments: List[Segment] = []
    owners: List[Tuple[int, int, int]] = []
    for k, e in enumerate(graph.edges):
        length = float(e.length)
        h = length / subdivisions
        chain = [index[e.u]]
        for step in range(1, subdivisions):
            chain.append(len(nodes))
            nodes.append((k, step * h))
        chain.append(index[e.v])
        for a in range(subdivisions):
            segments.append((chain[a], chain[a + 1], h))
            owners.append((chain[a], chain[a + 1], k))
    return nodes, segments, owners


def _lumped_masses(graph: MetrizedGraph, mu: ZhangMeasure, n: int, segments, owners) -> np.ndarray:
    masses = np.zeros(n)
    for i, v in enumerate(graph.vertices):
        masses[i] = mu.atoms.get(v, 0.0)
    for (i, j, h), (_, _, k) in zip(segments, owners):
        half = 0.5 * mu.densities.get(k, 0.0) * h
        masses[i] += half
        masses[j] += half
    return masses


def green_matrix(graph: MetrizedGraph, mu: ZhangMeasure, subdivisions: int) -> DiscreteGreen:
    """
    g(x, y) = K(x, y) - (K mu)(x) - (K mu)(y) + mu^T K mu，K 为接地逆矩阵。
    L 取半正定号 (D - A)，因此圆周上 g(x, x) > 0。
    """
    if subdivisions < 2:
        raise InvalidSpec(f"每条边至少剖分为 2 段，收到 {subdivisions}", subdivisions=subdivisions)
    nodes, segments, owners = _subdivide(graph, subdivisions)
    n = len(nodes)
    masses = _lumped_masses(graph, mu, n, segments, owners)
    L = laplacian_matrix(n, segments)
    K = grounded_inverse(L, ground=0)
    Km = K @ masses
    G = K - Km[:, None] - Km[None, :] + float(masses @ Km)
    return DiscreteGreen(nodes, masses, L, G)


def green_diagonal(graph: MetrizedGraph, mu: ZhangMeasure, subdivisions: int | None = None,
                   extrapolate: bool | None = None) -> GreenDiagonal:
    """
    在 N 等分剖分的全部节点上给出 g_mu(x, x)；
    extrapolate 时与 2N 剖分在公共节点上做 (4 F_2N - F_N)/3。
    """
    current_config = config_module.get_current_config()
    N = current_config["GREEN_SUBDIVISIONS"] if subdivisions is None else subdivisions
    extrapolate = current_config["GREEN_EXTRAPOLATE"] if extrapolate is None else extrapolate
    coarse = green_matrix(graph, mu, N)
    values = coarse.diagonal
    if extrapolate:
        fine = green_matrix(graph, mu, 2 * N).diagonal
        values = (4 * fine[_coarse_in_fine(graph, N)] - values) / 3
    return GreenDiagonal(coarse.nodes, values, N, bool(extrapolate))


def _coarse_in_fine(graph: MetrizedGraph, N: int) -> np.ndarray:
    """N 剖分节点在 2N 剖分中的下标 (顶点在前，每条边的内部节点依次排列)。"""
    V = len(graph.vertices)
    idx = list(range(V))
    for k in range(len(graph.edges)):
        base_fine = V + k * (2 * N - 1)
        for step in range(1, N):
            idx.append(base_fine + 2 * step - 1)
    return np.array(idx, dtype=int)


def _epsilon_phi(graph: MetrizedGraph, polarization: Polarization, mu: ZhangMeasure, N: int,
                 g: int, delta: float) -> Tuple[float, float]:
    green = green_matrix(graph, mu, N)
    diag = green.diagonal
    K = np.zeros(len(green.nodes))
    for i, value in enumerate(polarization.canonical_divisor(graph).values()):
        K[i] = value
    epsilon = float(diag @ ((2 * g - 2) * green.masses + K))
    phi = -delta / 4 + 0.25 * float(diag @ ((10 * g + 2) * green.masses - K))
    return epsilon, phi


def graph_invariants(graph: MetrizedGraph, polarization: Polarization, subdivisions: int | None = None,
                     extrapolate: bool | None = None, moment_method: str | None = None,
                     moment_resolution: int | None = None) -> GraphInvariants:
    """
    epsilon = int g_mu(x,x) ((2g-2) mu + delta_K)
    phi     = -delta/4 + 1/4 int g_mu(x,x) ((10g+2) mu - delta_K)
    tau     = (delta + 4 phi - 2 epsilon) / 12
    I_jac   = 热带 Jacobian 的热带矩 (格求积，与上面的位势计算互不相关)
    """
    current_config = config_module.get_current_config()
    N = current_config["GREEN_SUBDIVISIONS"] if subdivisions is None else subdivisions
    extrapolate = current_config["GREEN_EXTRAPOLATE"] if extrapolate is None else extrapolate
    g, g0, delta = _require_genus(graph, polarization)

    if not graph.edges:
        return GraphInvariants(g, g0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)

    mu = zhang_measure(graph, polarization)
    epsilon, phi = _epsilon_phi(graph, polarization, mu, N, g, delta)
    if extrapolate:
        eps_fine, phi_fine = _epsilon_phi(graph, polarization, mu, 2 * N, g, delta)
        epsilon = (4 * eps_fine - epsilon) / 3
        phi = (4 * phi_fine - phi) / 3
    tau = (delta + 4 * phi - 2 * epsilon) / 12

    gram, _ = tropical_jacobian(graph)
    moment = tropical_moment(gram, moment_method, moment_resolution)
    logger.info(
        f"图 {graph.name or '(未命名)'}: g={g}, g0={g0}, delta={delta:.6g}, epsilon={epsilon:.6g}, "
        f"phi={phi:.6g}, tau={tau:.6g}, I(Jac)={moment.estimate:.6g}"
    )
    return GraphInvariants(g, g0, delta, epsilon, phi, tau, moment.estimate, moment.error_estimate)
