# workflows/theta_flow.py

import logging
import math
from typing import Any, Dict

import numpy as np

from core.errors import InvalidSpec
from data_ingestion.loaders import load_period
from data_ingestion.schemas import RunConfig
from theta.invariant import MONTE_CARLO, abelian_invariant, theta_l2_normalization
from theta.period import PeriodMatrix, RealPairPoint
from theta.riemann import riemann_theta, theta_norm

logger = logging.getLogger(__name__)


def _point(config: RunConfig, tau: PeriodMatrix) -> RealPairPoint:
    a = list(config.a) or [0.0] * tau.g
    b = list(config.b) or [0.0] * tau.g
    if len(a) != tau.g or len(b) != tau.g:
        raise InvalidSpec(f"--a/--b 的长度必须等于亏格 {tau.g}", g=tau.g)
    return RealPairPoint(np.array(a, dtype=float), np.array(b, dtype=float))


def eval_report(config: RunConfig) -> Dict[str, Any]:
    """z = a + tau b，默认 z = 0。"""
    tau = load_period(config.input)
    point = _point(config, tau)
    z = tau.z_of(point)
    evaluation = riemann_theta(tau, z, config.tol)
    return {
        "command": config.command,
        "g": tau.g,
        "z": z,
        "theta": evaluation.value,
        "tail_bound": evaluation.tail_bound,
        "terms_used": evaluation.terms_used,
        "theta_norm": theta_norm(tau, point, config.tol),
    }


def invariant_report(config: RunConfig) -> Dict[str, Any]:
    tau = load_period(config.input)
    estimate = abelian_invariant(tau, config.method or MONTE_CARLO, config.samples, config.seed)
    return {"command": config.command, "g": tau.g, "estimate": estimate}


def l2_report(config: RunConfig) -> Dict[str, Any]:
    tau = load_period(config.input)
    estimate = theta_l2_normalization(tau, config.method or MONTE_CARLO, config.samples, config.seed)
    expected = 2 ** (-tau.g / 2)
    return {
        "command": config.command,
        "g": tau.g,
        "estimate": estimate.I,
        "stderr": estimate.stderr,
        "samples": estimate.samples,
        "expected": expected,
        "relative_deviation": abs(estimate.I - expected) / expected,
        "log_ratio": math.log(estimate.I / expected) if estimate.I > 0 else -math.inf,
    }


def run(config: RunConfig) -> Dict[str, Any]:
    handlers = {
        "theta eval": eval_report,
        "theta invariant": invariant_report,
        "theta l2": l2_report,
    }
    return handlers[config.command](config)
