# core/errors.py

"""
异常层次结构。

两个分支对应命令行的退出码:
- InputValidationError: 输入不合法 (退出码 1)
- NumericalError: 数值计算未收敛或失败 (退出码 2)
"""

from typing import Any, Dict


class TropThetaError(Exception):
    """所有领域异常的基类。"""

    exit_code = 1

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        return {"error": type(self).__name__, "message": self.message, **self.details}


class InputValidationError(TropThetaError):
    exit_code = 1


class NumericalError(TropThetaError):
    exit_code = 2


# --- 输入校验 ---

class NotSymmetric(InputValidationError):
    pass


class NotPositiveDefinite(InputValidationError):
    def __init__(self, message: str, pivot_index: int, **details: Any):
        super().__init__(message, pivot_index=pivot_index, **details)
        self.pivot_index = pivot_index


class NotInSiegelSpace(NotPositiveDefinite):
    pass


class RankMismatch(InputValidationError):
    pass


class ResolutionTooSmall(InputValidationError):
    pass


class InvalidT(InputValidationError):
    pass


class InvalidGrid(InputValidationError):
    pass


class GenusZero(InputValidationError):
    pass


class GenusTooSmall(InputValidationError):
    pass


class InvalidPolarization(InputValidationError):
    pass


class DisconnectedGraph(InputValidationError):
    pass


class DisconnectedSpecialFiber(DisconnectedGraph):
    pass


class InvalidSpec(InputValidationError):
    pass


class MissingPlaceData(InputValidationError):
    pass


class SchemaError(InputValidationError):
    pass


# --- 数值失败 ---

class TruncationFailure(NumericalError):
    pass


class NonFinite(NumericalError):
    pass


class IllConditionedFit(NumericalError):
    pass


class SolveFailure(NumericalError):
    pass


class MeasureNormalizationError(NumericalError):
    pass
