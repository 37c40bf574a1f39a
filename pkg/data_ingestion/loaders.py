# data_ingestion/loaders.py

"""
读取 JSON 输入并构造领域对象。

解析错误统一转换成 SchemaError: JSON 语法错误带出 line/column，
pydantic 校验错误带出出错字段的位置。
"""

import json
import logging
from pathlib import Path
from typing import Any, Tuple, Type, TypeVar, Union

from pydantic import BaseModel, ValidationError

from bounds.curve import CurveArithmeticData, FinitePlace, InfinitePlace, PlaceInvariants, validate_curve
from core.errors import SchemaError
from data_ingestion.schemas import (CurveSchema, FamilySchema, GramSchema, GraphSchema, PeriodSchema,
                                    ReductionSchema, SectionSchema)
from degeneration.family import PeriodFamily, SectionSpec, validate_family
from graph.metrized import MetrizedGraph, Polarization, validate_graph, validate_polarization
from graph.reduction import reduction_graph
from lattice.gram import GramLattice, validate_gram
from theta.period import PeriodMatrix, validate_period

logger = logging.getLogger(__name__)

ModelT = TypeVar("ModelT", bound=BaseModel)


def load_json(path: Union[str, Path]) -> Any:
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"JSON 解析失败 ({path.name}): {e.msg}", path=str(path), line=e.lineno,
                          column=e.colno) from e
    except OSError as e:
        raise SchemaError(f"无法读取文件 {path}: {e.strerror}", path=str(path)) from e


def parse_model(model: Type[ModelT], data: Any, source: str = "") -> ModelT:
    try:
        return model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        position = ".".join(str(p) for p in first["loc"])
        raise SchemaError(f"{source or model.__name__} 不符合格式: {position}: {first['msg']}",
                          path=source, position=position, errors=e.error_count()) from e


def _load(model: Type[ModelT], path: Union[str, Path]) -> ModelT:
    return parse_model(model, load_json(path), str(path))


# ==============================================================================
#  lattice / theta
# ==============================================================================

def load_gram(path: Union[str, Path]) -> GramLattice:
    schema = _load(GramSchema, path)
    return validate_gram(schema.gram)


def load_period(path: Union[str, Path]) -> PeriodMatrix:
    schema = _load(PeriodSchema, path)
    return validate_period(schema.tau)


# ==============================================================================
#  degeneration
# ==============================================================================

def family_from_schema(schema: FamilySchema) -> PeriodFamily:
    return validate_family(schema.g1, schema.g2, schema.m, schema.B, schema.S1, schema.S2, schema.S3, schema.name)


def load_family(path: Union[str, Path]) -> PeriodFamily:
    return family_from_schema(_load(FamilySchema, path))


def load_section(path: Union[str, Path]) -> SectionSpec:
    schema = _load(SectionSchema, path)
    return SectionSpec(tuple(schema.a), tuple(schema.b))


# ==============================================================================
#  graph
# ==============================================================================

def graph_from_schema(schema: Union[GraphSchema, ReductionSchema]) -> Tuple[MetrizedGraph, Polarization]:
    if isinstance(schema, ReductionSchema):
        nodes = [(n.u, n.v, n.thickness) for n in schema.nodes]
        return reduction_graph(nodes, {c.id: c.genus for c in schema.components}, schema.name)
    graph = validate_graph(
        [v.id for v in schema.vertices],
        [(e.u, e.v, e.length) for e in schema.edges],
        schema.name,
    )
    return graph, validate_polarization(graph, {v.id: v.q for v in schema.vertices})


def _graph_data(data: Any, source: str) -> Union[GraphSchema, ReductionSchema]:
    if isinstance(data, dict) and "components" in data:
        return parse_model(ReductionSchema, data, source)
    return parse_model(GraphSchema, data, source)


def load_graph(path: Union[str, Path]) -> Tuple[MetrizedGraph, Polarization]:
    """普通度量图 (vertices/edges) 或约化图 (components/nodes)。"""
    return graph_from_schema(_graph_data(load_json(path), str(path)))


# ==============================================================================
#  bounds
# ==============================================================================

def load_curve(path: Union[str, Path]) -> CurveArithmeticData:
    """有限位的图可以是相对于曲线文件的路径，也可以内联给出。"""
    path = Path(path)
    schema = _load(CurveSchema, path)
    finite = []
    for k, place in enumerate(schema.finite_places):
        if place.invariants is not None:
            inv = place.invariants
            finite.append(FinitePlace(place.norm, invariants=PlaceInvariants(inv.delta, inv.epsilon, inv.phi),
                                      label=place.label))
            continue
        if isinstance(place.graph, str):
            graph, polarization = load_graph(path.parent / place.graph)
        else:
            graph, polarization = graph_from_schema(place.graph)
        finite.append(FinitePlace(place.norm, graph, polarization, label=place.label or graph.name))
    infinite = [InfinitePlace(p.delta, p.phi, p.label) for p in schema.infinite_places]
    logger.debug(f"曲线数据 {path.name}: {len(finite)} 个有限位, {len(infinite)} 个无穷位")
    return validate_curve(schema.g, schema.d_K, schema.omega_sq, schema.h_fal, finite, infinite, schema.name)
