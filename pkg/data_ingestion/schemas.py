# data_ingestion/schemas.py

"""
所有 JSON 输入的 pydantic 模型。

- 有理数写成 [num, den]，整数保持为整数，二者都会在构造领域对象时进入精确模式；
- 复数写成 {"re": .., "im": ..}，也可以直接写实数；
- 未知字段一律拒绝。
"""

import math
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, FiniteFloat, model_validator


def _rational(value: Any) -> Any:
    if isinstance(value, bool):
        raise ValueError("布尔值不是数")
    if isinstance(value, (list, tuple)):
        if len(value) != 2 or not all(isinstance(v, int) and not isinstance(v, bool) for v in value):
            raise ValueError("有理数必须写成 [num, den] 两个整数")
        if value[1] == 0:
            raise ValueError("有理数的分母不能为 0")
        return Fraction(value[0], value[1])
    if isinstance(value, float) and not math.isfinite(value):
        raise ValueError(f"数必须是有限的，收到 {value!r}")
    if isinstance(value, (int, float, Fraction)):
        return value
    raise ValueError(f"无法解析为数: {value!r}")


def _complex(value: Any) -> complex:
    if isinstance(value, dict):
        if set(value) - {"re", "im"}:
            raise ValueError(f"复数只允许 re/im 两个键，收到 {sorted(value)}")
        z = complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    elif isinstance(value, (int, float)) and not isinstance(value, bool):
        z = complex(value)
    else:
        raise ValueError(f"无法解析为复数: {value!r}")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"复数必须是有限的，收到 {value!r}")
    return z


def _parameter_t(value: Any) -> Any:
    """参数 t: 实数、{re, im}，或命令行上的 "re,im" / "a+bj" 字符串。虚部为 0 时返回实数。"""
    if isinstance(value, str):
        text = value.replace(" ", "")
        try:
            if "," in text:
                re_part, im_part = text.split(",")
                value = {"re": float(re_part), "im": float(im_part)}
            else:
                value = complex(text)
                value = {"re": value.real, "im": value.imag}
        except ValueError as e:
            raise ValueError(f"无法解析参数 t: {text!r}，应写成 re,im 或 a+bj") from e
    t = _complex(value)
    return t.real if t.imag == 0 else t


Rational = Annotated[Any, BeforeValidator(_rational)]
ComplexNumber = Annotated[Any, BeforeValidator(_complex)]
ParameterT = Annotated[Any, BeforeValidator(_parameter_t)]
ComplexMatrix = List[List[ComplexNumber]]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ==============================================================================
#  lattice / theta
# ==============================================================================

class GramSchema(StrictModel):
    rank: int = Field(..., ge=0, description="格的秩 r。")
    gram: List[List[Rational]] = Field(default_factory=list, description="r x r 对称正定 Gram 矩阵。")
    name: str = ""

    @model_validator(mode="after")
    def rank_matches_gram(self):
        if len(self.gram) != self.rank:
            raise ValueError(f"rank = {self.rank} 与 Gram 矩阵的行数 {len(self.gram)} 不一致")
        return self


class PeriodSchema(StrictModel):
    g: int = Field(..., ge=1, description="亏格。")
    tau: ComplexMatrix = Field(..., description="g x g 周期矩阵，元素为 {re, im}。")
    name: str = ""

    @model_validator(mode="after")
    def genus_matches_tau(self):
        if len(self.tau) != self.g:
            raise ValueError(f"g = {self.g} 与 tau 的行数 {len(self.tau)} 不一致")
        return self


# ==============================================================================
#  degeneration
# ==============================================================================

class FamilySchema(StrictModel):
    g1: int = Field(..., ge=0)
    g2: int = Field(..., ge=0)
    m: int = Field(1, ge=1, description="t = s^m 中的 m。")
    B: List[List[Rational]] = Field(default_factory=list, description="g2 x g2 单值化矩阵。")
    S1: List[ComplexMatrix] = Field(default_factory=list, description="S1(s) 的系数，按 s 的次数递增。")
    S2: List[ComplexMatrix] = Field(default_factory=list)
    S3: List[ComplexMatrix] = Field(default_factory=list)
    name: str = ""


class SectionSchema(StrictModel):
    a: List[FiniteFloat] = Field(..., description="截面的 a 坐标 (长度 g)。")
    b: List[FiniteFloat] = Field(..., description="截面的 b 坐标 (长度 g)。")


# ==============================================================================
#  graph
# ==============================================================================

class VertexSchema(StrictModel):
    id: str
    q: int = Field(0, ge=0, description="极化系数 q(v)。")


class EdgeSchema(StrictModel):
    u: str
    v: str
    length: Rational


class GraphSchema(StrictModel):
    vertices: List[VertexSchema] = Field(..., min_length=1)
    edges: List[EdgeSchema] = Field(default_factory=list)
    name: str = ""


class ComponentSchema(StrictModel):
    id: str
    genus: int = Field(0, ge=0)


class NodeSchema(StrictModel):
    u: str
    v: str
    thickness: int = Field(1, ge=1, description="结点的厚度 n，对应边长。")


class ReductionSchema(StrictModel):
    """半稳定模型特殊纤维: 不可约分支与结点。"""
    components: List[ComponentSchema] = Field(..., min_length=1)
    nodes: List[NodeSchema] = Field(default_factory=list)
    name: str = ""


# ==============================================================================
#  bounds
# ==============================================================================

class PlaceInvariantsSchema(StrictModel):
    delta: float
    epsilon: float
    phi: float


class FinitePlaceSchema(StrictModel):
    norm: int = Field(..., ge=2, description="剩余域的元素个数 N(v)。")
    graph: Optional[Union[str, GraphSchema, ReductionSchema]] = Field(
        None, description="约化图: 相对曲线文件的路径或内联对象。"
    )
    invariants: Optional[PlaceInvariantsSchema] = None
    label: str = ""

    @model_validator(mode="after")
    def one_source(self):
        if (self.graph is None) == (self.invariants is None):
            raise ValueError("有限位必须恰好给出 graph 或 invariants 之一")
        return self


class InfinitePlaceSchema(StrictModel):
    delta: float
    phi: float
    label: str = ""


class CurveSchema(StrictModel):
    g: int = Field(..., ge=2)
    d_K: int = Field(..., ge=1)
    omega_sq: float = Field(..., ge=0)
    h_fal: float
    finite_places: List[FinitePlaceSchema] = Field(default_factory=list)
    infinite_places: List[InfinitePlaceSchema] = Field(default_factory=list)
    name: str = ""


# ==============================================================================
#  命令行
# ==============================================================================

COMMANDS = (
    "trop moment", "trop value", "trop isometry",
    "theta eval", "theta invariant", "theta l2",
    "family period", "family trop", "family alpha", "family probe", "family fit",
    "graph invariants", "graph jacobian", "graph identity", "graph resistance",
    "bounds curve", "bounds tautological", "bounds estimates",
)


class RunConfig(StrictModel):
    """一次命令行调用的全部参数。未给出的数值参数回落到配置字典。"""
    command: Literal[COMMANDS]
    input: Optional[Path] = None
    other: Optional[Path] = Field(None, description="第二个输入: 比较用的格，或截面 JSON。")
    seed: Optional[int] = None
    samples: Optional[int] = Field(None, gt=0)
    resolution: Optional[int] = Field(None, gt=0)
    method: Optional[str] = None
    subdivisions: Optional[int] = Field(None, gt=0)
    extrapolate: Optional[bool] = None
    format: Literal["json", "csv"] = "json"
    tol: Optional[FiniteFloat] = Field(None, gt=0)
    t: List[ParameterT] = Field(default_factory=list, description="参数 t，可以是复数。")
    a: List[FiniteFloat] = Field(default_factory=list)
    b: List[FiniteFloat] = Field(default_factory=list)
    x: List[FiniteFloat] = Field(default_factory=list)
    points: List[str] = Field(default_factory=list, description="图上的点: 顶点 id 或 'e<k>:<offset>'。")
    branch: int = 0
    g: Optional[int] = None
    r: Optional[int] = None
    m: List[int] = Field(default_factory=list)
    c1: Optional[FiniteFloat] = None
    c2: Optional[FiniteFloat] = None
    workers: Optional[int] = Field(None, ge=1)
    correction: Optional[bool] = Field(None, description="拟合是否加入 |t|^lambda 修正列。")

    @model_validator(mode="after")
    def input_present(self):
        if self.input is None and self.command not in ("bounds estimates",):
            raise ValueError(f"命令 {self.command} 需要输入文件")
        return self
