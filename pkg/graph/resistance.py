# graph/resistance.py

"""
有效电阻: 把边在内部点处剖分，按电导 1/length 组装加权拉普拉斯矩阵，
接地一个节点后求解线性方程组。
"""

import logging
import math
from collections import defaultdict
from typing import Dict, List, Sequence, Tuple

import networkx as nx
import numpy as np
import scipy.linalg

from core.errors import SolveFailure
from graph.metrized import GraphPoint, MetrizedGraph

logger = logging.getLogger(__name__)

Segment = Tuple[int, int, float]


def laplacian_matrix(n: int, segments: Sequence[Segment]) -> np.ndarray:
    """L = D - A，电导为 1/length；自环对 L 没有贡献。"""
    L = np.zeros((n, n))
    for i, j, length in segments:
        if i == j:
            continue
        c = 1.0 / length
        L[i, i] += c
        L[j, j] += c
        L[i, j] -= c
        L[j, i] -= c
    return L


def grounded_inverse(L: np.ndarray, ground: int = 0) -> np.ndarray:
    """
    去掉 ground 行列后的逆矩阵，在 ground 处补零。
    连通图上它满足 L K = I - e_ground 1^T。
    """
    n = L.shape[0]
    keep = [i for i in range(n) if i != ground]
    K = np.zeros((n, n))
    if not keep:
        return K
    try:
        factor = scipy.linalg.cho_factor(L[np.ix_(keep, keep)])
        K[np.ix_(keep, keep)] = scipy.linalg.cho_solve(factor, np.eye(len(keep)))
    except (np.linalg.LinAlgError, ValueError) as e:
        raise SolveFailure(f"接地拉普拉斯矩阵求解失败: {e}") from e
    return (K + K.T) / 2


def split_network(graph: MetrizedGraph, points: Sequence[GraphPoint]) -> Tuple[List[int], int, List[Segment]]:
    """
    在给定点处剖分边。返回 (每个点对应的节点下标, 节点总数, 线段列表)；
    前 |V| 个节点就是原图的顶点。
    """
    index = graph.index
    n = len(graph.vertices)
    cuts: Dict[int, List[float]] = defaultdict(list)
    for p in points:
        p.check(graph)
        if p.vertex is None:
            cuts[p.edge].append(float(p.offset))

    node_of_cut: Dict[Tuple[int, float], int] = {}
    segments: List[Segment] = []
    for k, e in enumerate(graph.edges):
        offsets = sorted(set(cuts.get(k, [])))
        chain = [index[e.u]]
        for offset in offsets:
            node_of_cut[(k, offset)] = n
            chain.append(n)
            n += 1
        chain.append(index[e.v])
        positions = [0.0, *offsets, float(e.length)]
        for a in range(len(chain) - 1):
            segments.append((chain[a], chain[a + 1], positions[a + 1] - positions[a]))

    nodes = [index[p.vertex] if p.vertex is not None else node_of_cut[(p.edge, float(p.offset))] for p in points]
    return nodes, n, segments


def _same_point(p: GraphPoint, q: GraphPoint) -> bool:
    if p.vertex is not None or q.vertex is not None:
        return p.vertex == q.vertex
    return p.edge == q.edge and float(p.offset) == float(q.offset)


def effective_resistance(graph: MetrizedGraph, p: GraphPoint, q: GraphPoint) -> float:
    """r(p, q)：在 p 处接地，向 q 注入单位电流，r = q 处的电势。"""
    if _same_point(p, q):
        p.check(graph)
        return 0.0
    (i, j), n, segments = split_network(graph, [p, q])
    K = grounded_inverse(laplacian_matrix(n, segments), ground=i)
    return float(K[j, j])


def edge_complement_resistance(graph: MetrizedGraph, edge_index: int) -> float:
    """
    r(e) = r(Gamma - e; e 的两个端点)。自环为 0，桥为 inf。
    """
    e = graph.edges[edge_index]
    if e.is_loop:
        return 0.0
    rest = graph.to_networkx(skip=[edge_index])
    if not nx.has_path(rest, e.u, e.v):
        return math.inf
    index = graph.index
    segments = [(index[f.u], index[f.v], float(f.length)) for k, f in enumerate(graph.edges) if k != edge_index]
    # 只在端点所在的连通分支上求解；删去一条非桥边后图仍连通
    K = grounded_inverse(laplacian_matrix(len(graph.vertices), segments), ground=index[e.u])
    return float(K[index[e.v], index[e.v]])
