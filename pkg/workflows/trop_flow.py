# workflows/trop_flow.py

import logging
from typing import Any, Dict

from core.errors import InvalidSpec, RankMismatch
from data_ingestion.loaders import load_gram
from data_ingestion.schemas import RunConfig
from lattice.isometry import isometry_check
from lattice.moment import tropical_moment
from lattice.tropical import tropical_psi, tropical_theta_norm

logger = logging.getLogger(__name__)


def moment_report(config: RunConfig) -> Dict[str, Any]:
    lattice = load_gram(config.input)
    estimate = tropical_moment(lattice, config.method, config.resolution, config.seed)
    report = {
        "command": config.command,
        "rank": lattice.rank,
        "estimate": estimate.estimate,
        "error_estimate": estimate.error_estimate,
        "method": estimate.method,
        "points": estimate.points,
    }
    if lattice.rank == 1:
        # 秩 1 时有闭式 b/12
        report["closed_form"] = lattice.gram[0][0] / 12
    return report


def value_report(config: RunConfig) -> Dict[str, Any]:
    lattice = load_gram(config.input)
    if len(config.x) != lattice.rank:
        raise RankMismatch(f"--x 给出了 {len(config.x)} 个坐标，格的秩为 {lattice.rank}",
                           expected=lattice.rank, received=len(config.x))
    value, minimizers = tropical_theta_norm(lattice, config.x, config.tol)
    return {
        "command": config.command,
        "x": list(config.x),
        "value": value,
        "psi": tropical_psi(lattice, config.x),
        "minimizers": sorted(list(n) for n in minimizers),
    }


def isometry_report(config: RunConfig) -> Dict[str, Any]:
    if config.other is None:
        raise InvalidSpec("trop isometry 需要用 --other 给出第二个格")
    first = load_gram(config.input)
    second = load_gram(config.other)
    return {"command": config.command, "rank": first.rank, "result": isometry_check(first, second)}


def run(config: RunConfig) -> Dict[str, Any]:
    handlers = {
        "trop moment": moment_report,
        "trop value": value_report,
        "trop isometry": isometry_report,
    }
    return handlers[config.command](config)
