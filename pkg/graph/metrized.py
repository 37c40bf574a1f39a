# graph/metrized.py

"""
极化度量图: 顶点、带长度的边 (允许自环与重边)、顶点极化 q。

K = sum_p (n_p + q_p - 2) p，亏格 g = deg K / 2 + 1，g0 = |E| - |V| + 1。
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Mapping, Sequence, Tuple, Union

import networkx as nx

from core.errors import DisconnectedGraph, InvalidPolarization, InvalidSpec

logger = logging.getLogger(__name__)

Length = Union[int, Fraction, float]


@dataclass(frozen=True)
class Edge:
    u: str
    v: str
    length: Length

    @property
    def is_loop(self) -> bool:
        return self.u == self.v


@dataclass(frozen=True)
class MetrizedGraph:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    name: str = field(default="", compare=False)

    @property
    def index(self) -> Dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    def lengths(self) -> list:
        return [float(e.length) for e in self.edges]

    def valence(self) -> Dict[str, int]:
        n = {v: 0 for v in self.vertices}
        for e in self.edges:
            n[e.u] += 1
            n[e.v] += 1
        return n

    def to_networkx(self, skip: Iterable[int] = ()) -> nx.MultiGraph:
        """边的 key 为其在 edges 中的下标。"""
        skipped = set(skip)
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for k, e in enumerate(self.edges):
            if k not in skipped:
                graph.add_edge(e.u, e.v, key=k, length=float(e.length))
        return graph

    def scaled(self, c: Length) -> "MetrizedGraph":
        return MetrizedGraph(self.vertices, tuple(Edge(e.u, e.v, e.length * c) for e in self.edges), self.name)

    def subdivided(self, edge_index: int, offset: Length, new_vertex: str) -> "MetrizedGraph":
        """在第 edge_index 条边上距 u 为 offset 处插入一个 2 价顶点。"""
        e = self.edges[edge_index]
        if not 0 < offset < e.length:
            raise InvalidSpec(f"插入点必须位于边内部: offset={offset}, length={e.length}")
        edges = list(self.edges)
        edges[edge_index: edge_index + 1] = [Edge(e.u, new_vertex, offset), Edge(new_vertex, e.v, e.length - offset)]
        return MetrizedGraph(self.vertices + (new_vertex,), tuple(edges), self.name)


@dataclass(frozen=True)
class Polarization:
    q: Mapping[str, int]

    def __getitem__(self, vertex: str) -> int:
        return self.q.get(vertex, 0)

    def canonical_divisor(self, graph: MetrizedGraph) -> Dict[str, int]:
        """K 在每个顶点的系数 n_p + q_p - 2。"""
        n = graph.valence()
        return {v: n[v] + self[v] - 2 for v in graph.vertices}


@dataclass(frozen=True)
class GraphPoint:
    """顶点，或者某条边内部距起点 offset 的点。"""
    vertex: str | None = None
    edge: int | None = None
    offset: float | None = None

    @classmethod
    def at_vertex(cls, vertex: str) -> "GraphPoint":
        return cls(vertex=vertex)

    @classmethod
    def on_edge(cls, edge: int, offset: float) -> "GraphPoint":
        return cls(edge=edge, offset=offset)

    def check(self, graph: MetrizedGraph) -> "GraphPoint":
        if self.vertex is not None:
            if self.vertex not in graph.index:
                raise InvalidSpec(f"未知顶点: {self.vertex}")
            return self
        if self.edge is None or not 0 <= self.edge < len(graph.edges):
            raise InvalidSpec(f"未知的边下标: {self.edge}")
        length = float(graph.edges[self.edge].length)
        if self.offset is None or not 0 < self.offset < length:
            raise InvalidSpec(f"边上的点必须严格位于内部: offset={self.offset}, length={length}")
        return self


def validate_graph(vertices: Sequence[str], edges: Sequence[Tuple[str, str, Length]], name: str = "") -> MetrizedGraph:
    """检查边长为正、端点存在且图连通。"""
    if not vertices:
        raise InvalidSpec("图至少需要一个顶点")
    vertex_set = set(vertices)
    if len(vertex_set) != len(vertices):
        raise InvalidSpec("顶点 id 重复")
    checked = []
    for k, (u, v, length) in enumerate(edges):
        if u not in vertex_set or v not in vertex_set:
            raise InvalidSpec(f"第 {k} 条边的端点不存在: ({u}, {v})", edge=k)
        if not float(length) > 0:
            raise InvalidSpec(f"第 {k} 条边的长度必须为正，收到 {length}", edge=k)
        checked.append(Edge(u, v, length))
    graph = MetrizedGraph(tuple(vertices), tuple(checked), name)
    if not nx.is_connected(graph.to_networkx()):
        raise DisconnectedGraph(f"图不连通: {name or '(未命名)'}")
    return graph


def validate_polarization(graph: MetrizedGraph, q: Mapping[str, int]) -> Polarization:
    unknown = set(q) - set(graph.vertices)
    if unknown:
        raise InvalidPolarization(f"极化中含有未知顶点: {sorted(unknown)}")
    polarization = Polarization(dict(q))
    for v, coefficient in polarization.canonical_divisor(graph).items():
        if polarization[v] < 0 or coefficient < 0:
            raise InvalidPolarization(
                f"顶点 {v} 处 K 的系数 n_p + q_p - 2 = {coefficient} 为负 (或 q_p < 0)", vertex=v
            )
    degree = sum(polarization.canonical_divisor(graph).values())
    if degree % 2:
        raise InvalidPolarization(f"deg K = {degree} 为奇数，亏格不是整数", degree=degree)
    return polarization


def genus_and_lengths(graph: MetrizedGraph, polarization: Polarization) -> Tuple[int, int, float]:
    """(g, g0, delta)：g = deg K / 2 + 1，g0 = |E| - |V| + 1，delta 为总长度。"""
    degree = sum(polarization.canonical_divisor(graph).values())
    g = degree // 2 + 1
    g0 = len(graph.edges) - len(graph.vertices) + 1
    delta = sum(graph.lengths())
    return g, g0, delta
