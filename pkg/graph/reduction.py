# graph/reduction.py

"""
半稳定模型特殊纤维的对偶图 (约化图): 每个不可约分支一个顶点，每个结点一条边，
边长为结点的厚度 n。顶点极化取 q_v = 2 g_v，使极化亏格等于曲线亏格 g0 + sum g_v。
"""

import logging
from typing import Mapping, Sequence, Tuple

from core.errors import DisconnectedGraph, DisconnectedSpecialFiber, InvalidSpec
from graph.metrized import MetrizedGraph, Polarization, validate_graph, validate_polarization

logger = logging.getLogger(__name__)


def reduction_graph(nodes: Sequence[Tuple[str, str, int]], vertex_genera: Mapping[str, int],
                    name: str = "") -> Tuple[MetrizedGraph, Polarization]:
    components = list(vertex_genera)
    for u, v, _ in nodes:
        for c in (u, v):
            if c not in vertex_genera and c not in components:
                components.append(c)

    edges = []
    for k, (u, v, thickness) in enumerate(nodes):
        if isinstance(thickness, bool) or int(thickness) != thickness or thickness < 1:
            raise InvalidSpec(f"第 {k} 个结点的厚度必须是正整数，收到 {thickness}", node=k)
        edges.append((u, v, int(thickness)))
    for c, genus in vertex_genera.items():
        if genus < 0:
            raise InvalidSpec(f"分支 {c} 的亏格为负: {genus}", component=c)

    try:
        graph = validate_graph(components, edges, name)
    except DisconnectedGraph as e:
        raise DisconnectedSpecialFiber(f"特殊纤维不连通: {e.message}") from e
    polarization = validate_polarization(graph, {c: 2 * vertex_genera.get(c, 0) for c in components})
    logger.debug(f"约化图: {len(components)} 个分支, {len(edges)} 个结点")
    return graph, polarization
