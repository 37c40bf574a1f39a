# workflows/graph_flow.py

import logging
import re
from typing import Any, Dict, Sequence

from core.errors import InvalidSpec
from data_ingestion.loaders import load_graph
from data_ingestion.schemas import RunConfig
from graph.checks import identity_and_bounds_check
from graph.jacobian import tropical_jacobian
from graph.metrized import GraphPoint, MetrizedGraph
from graph.potential import graph_invariants
from graph.resistance import edge_complement_resistance, effective_resistance
from lattice.moment import tropical_moment

logger = logging.getLogger(__name__)

_EDGE_POINT = re.compile(r"^e(\d+):(.+)$")


def parse_point(graph: MetrizedGraph, text: str) -> GraphPoint:
    """顶点 id，或者 'e<k>:<offset>' 表示第 k 条边上距起点 offset 的点。"""
    if text in graph.index:
        return GraphPoint.at_vertex(text)
    match = _EDGE_POINT.match(text)
    if match is None:
        raise InvalidSpec(f"无法识别的图上的点: {text!r}", point=text)
    try:
        offset = float(match.group(2))
    except ValueError as e:
        raise InvalidSpec(f"边上的位置不是数: {text!r}", point=text) from e
    return GraphPoint.on_edge(int(match.group(1)), offset).check(graph)


def invariants_report(config: RunConfig) -> Dict[str, Any]:
    graph, polarization = load_graph(config.input)
    inv = graph_invariants(graph, polarization, config.subdivisions, config.extrapolate, config.method,
                           config.resolution)
    return {"command": config.command, "graph": graph.name, "invariants": inv}


def jacobian_report(config: RunConfig) -> Dict[str, Any]:
    graph, _ = load_graph(config.input)
    gram, cycles = tropical_jacobian(graph)
    moment = tropical_moment(gram, config.method, config.resolution, config.seed)
    return {
        "command": config.command,
        "graph": graph.name,
        "rank": gram.rank,
        "gram": [list(row) for row in gram.gram],
        "cycles": [list(c) for c in cycles],
        "tropical_moment": moment,
    }


def identity_report(config: RunConfig) -> Dict[str, Any]:
    graph, polarization = load_graph(config.input)
    report = identity_and_bounds_check(graph, polarization, config.subdivisions, config.extrapolate,
                                       tol=config.tol, moment_method=config.method,
                                       moment_resolution=config.resolution)
    return {
        "command": config.command,
        "graph": graph.name,
        "invariants": report.invariants,
        "residual": report.residual,
        "relative_residual": report.relative_residual,
        "identity_passed": report.identity_passed,
        "slacks": report.slacks(),
        "passed": report.passed,
    }


def _edge_resistances(graph: MetrizedGraph) -> Sequence[float]:
    return [edge_complement_resistance(graph, k) for k in range(len(graph.edges))]


def resistance_report(config: RunConfig) -> Dict[str, Any]:
    """给出两个点时报告 r(p, q)，否则报告每条边的 r(e)。"""
    graph, _ = load_graph(config.input)
    if not config.points:
        return {"command": config.command, "graph": graph.name, "edge_resistances": _edge_resistances(graph)}
    if len(config.points) != 2:
        raise InvalidSpec(f"--point 需要恰好两个，收到 {len(config.points)} 个")
    p, q = (parse_point(graph, text) for text in config.points)
    return {
        "command": config.command,
        "graph": graph.name,
        "points": list(config.points),
        "resistance": effective_resistance(graph, p, q),
    }


def run(config: RunConfig) -> Dict[str, Any]:
    handlers = {
        "graph invariants": invariants_report,
        "graph jacobian": jacobian_report,
        "graph identity": identity_report,
        "graph resistance": resistance_report,
    }
    return handlers[config.command](config)
