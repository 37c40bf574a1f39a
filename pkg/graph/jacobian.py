# graph/jacobian.py

"""
热带 Jacobian: H_1(Gamma, Z) 配以内积 [e_i, e_j] = delta_ij l(e_i)。
基底取生成树的基本圈 (每条非树边一个圈)。
"""

import logging
from fractions import Fraction
from typing import Dict, List, Tuple

import networkx as nx

from graph.metrized import MetrizedGraph
from lattice.gram import GramLattice, validate_gram

logger = logging.getLogger(__name__)

CycleVector = Tuple[int, ...]


def spanning_tree_edges(graph: MetrizedGraph) -> List[int]:
    multigraph = graph.to_networkx()
    tree = nx.minimum_spanning_edges(multigraph, algorithm="kruskal", weight="length", keys=True, data=False)
    return sorted(key for _, _, key in tree)


def fundamental_cycles(graph: MetrizedGraph) -> List[CycleVector]:
    """每条非树边 k = (u, v) 给出圈 e_k + (树中 v 到 u 的路径)，系数按边的定向取 +1/-1。"""
    tree_keys = set(spanning_tree_edges(graph))
    tree = nx.Graph()
    tree.add_nodes_from(graph.vertices)
    orientation: Dict[Tuple[str, str], Tuple[int, int]] = {}
    for k in tree_keys:
        e = graph.edges[k]
        tree.add_edge(e.u, e.v)
        orientation[(e.u, e.v)] = (k, 1)
        orientation[(e.v, e.u)] = (k, -1)

    cycles = []
    for k, e in enumerate(graph.edges):
        if k in tree_keys:
            continue
        coefficients = [0] * len(graph.edges)
        coefficients[k] = 1
        if not e.is_loop:
            path = nx.shortest_path(tree, e.v, e.u)
            for a, b in zip(path, path[1:]):
                edge_index, sign = orientation[(a, b)]
                coefficients[edge_index] += sign
        cycles.append(tuple(coefficients))
    return cycles


def tropical_jacobian(graph: MetrizedGraph) -> Tuple[GramLattice, List[CycleVector]]:
    """
    Gram 矩阵 [c_i, c_j] = sum_e l(e) c_{i,e} c_{j,e}。
    所有边长为整数或有理数时 Gram 矩阵精确。
    """
    cycles = fundamental_cycles(graph)
    exact = all(isinstance(e.length, (int, Fraction)) and not isinstance(e.length, bool) for e in graph.edges)
    lengths = [Fraction(e.length) if exact else float(e.length) for e in graph.edges]
    gram = [
        [sum(lengths[e] * ci[e] * cj[e] for e in range(len(lengths)) if ci[e] and cj[e]) for cj in cycles]
        for ci in cycles
    ]
    if exact:
        gram = [[Fraction(v) for v in row] for row in gram]
    else:
        gram = [[float(v) for v in row] for row in gram]
    logger.debug(f"热带 Jacobian: 秩 {len(cycles)}")
    return validate_gram(gram), cycles
