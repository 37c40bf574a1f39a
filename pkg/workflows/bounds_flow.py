# workflows/bounds_flow.py

import logging
from typing import Any, Dict

from bounds.coefficients import omega_coefficient, omega_lower_bound, phi_coefficient, phi_lower_bound
from bounds.curve import aggregate, noether_residual
from bounds.tautological import (TautologicalSpec, corollary_coefficient, m_vector_estimates,
                                 tautological_height_bound)
from core.errors import InvalidSpec
from data_ingestion.loaders import load_curve
from data_ingestion.schemas import RunConfig

logger = logging.getLogger(__name__)


def _constants_given(config: RunConfig) -> bool:
    return config.c1 is not None and config.c2 is not None


def curve_report(config: RunConfig) -> Dict[str, Any]:
    """delta(X), phi(X), Noether 残差；给出 c1, c2 时再加上 phi 与 omega^2 的下界。"""
    data = load_curve(config.input)
    delta_X, phi_X = aggregate(data, config.subdivisions)
    report: Dict[str, Any] = {
        "command": config.command,
        "curve": data.name,
        "g": data.g,
        "d_K": data.d_K,
        "delta_X": delta_X,
        "phi_X": phi_X,
        "noether_residual": noether_residual(data, config.subdivisions),
    }
    if _constants_given(config):
        report["phi_bound"] = phi_lower_bound(data.g, delta_X, config.c1, config.c2, arithmetic=True, d_K=data.d_K)
        report["omega_bound"] = omega_lower_bound(data.g, data.d_K, data.h_fal, config.c1, config.c2,
                                                  delta_X=delta_X, phi_X=phi_X, omega_sq=data.omega_sq)
    else:
        logger.warning("未给出 --c1/--c2，跳过 phi 与 omega^2 的下界")
    return report


def tautological_report(config: RunConfig) -> Dict[str, Any]:
    data = load_curve(config.input)
    if config.r is None:
        raise InvalidSpec("bounds tautological 需要 --r")
    _, phi_X = aggregate(data, config.subdivisions)
    spec = TautologicalSpec(config.r, tuple(config.m))
    if _constants_given(config):
        bound = tautological_height_bound(data.g, spec, data.d_K, data.omega_sq, phi_X, data.h_fal, config.c1,
                                          config.c2)
    else:
        bound = tautological_height_bound(data.g, spec, data.d_K, data.omega_sq, phi_X)
    return {"command": config.command, "curve": data.name, "phi_X": phi_X, "bound": bound}


def estimates_report(config: RunConfig) -> Dict[str, Any]:
    """m 向量的初等估计；给出 --g 时附带三个精确系数。"""
    report: Dict[str, Any] = {"command": config.command}
    if config.m:
        report["m"] = list(config.m)
        report["estimates"] = m_vector_estimates(config.m)
    if config.g is not None:
        report["coefficients"] = {
            "phi": phi_coefficient(config.g),
            "omega": omega_coefficient(config.g),
            "corollary": corollary_coefficient(config.g),
        }
    if len(report) == 1:
        raise InvalidSpec("bounds estimates 需要 --m 或 --g")
    return report


def run(config: RunConfig) -> Dict[str, Any]:
    handlers = {
        "bounds curve": curve_report,
        "bounds tautological": tautological_report,
        "bounds estimates": estimates_report,
    }
    return handlers[config.command](config)
