# utils/report_writer.py

"""
确定性的 JSON / CSV 输出: 相同的配置必须得到逐字节相同的输出。
"""

import csv
import dataclasses
import enum
import io
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, IO, Iterable, Mapping, Sequence

import numpy as np

from core import config as config_module


def _round(x: float, digits: int) -> Any:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0:
        return 0.0
    return float(f"{x:.{digits}g}")


def to_jsonable(obj: Any, digits: int | None = None) -> Any:
    """递归转换为 JSON 可序列化的对象，浮点数保留 digits 位有效数字。"""
    if digits is None:
        digits = config_module.get_current_config()["FLOAT_SIG_DIGITS"]
    if isinstance(obj, enum.Enum):
        return to_jsonable(obj.value, digits)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        if obj.denominator == 1:
            return int(obj.numerator)
        return {"num": obj.numerator, "den": obj.denominator}
    if isinstance(obj, (float, np.floating)):
        return _round(float(obj), digits)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _round(obj.real, digits), "im": _round(obj.imag, digits)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v, digits) for v in obj.tolist()]
    if isinstance(obj, Path):
        return str(obj)
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name), digits) for f in dataclasses.fields(obj)}
    if isinstance(obj, Mapping):
        return {str(k): to_jsonable(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj, key=repr) if isinstance(obj, (set, frozenset)) else obj
        return [to_jsonable(v, digits) for v in items]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"无法序列化的对象类型: {type(obj).__name__}")


def dumps(report: Any) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(report: Any, stream: IO[str]) -> None:
    stream.write(dumps(report))


def write_csv(columns: Sequence[str], rows: Iterable[Sequence[Any]], stream: IO[str] | None = None) -> str:
    """写出表格 (列顺序固定)，返回写出的文本。"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([to_jsonable(v) for v in row])
    text = buffer.getvalue()
    if stream is not None:
        stream.write(text)
    return text
