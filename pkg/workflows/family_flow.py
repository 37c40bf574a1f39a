# workflows/family_flow.py

import logging
from typing import Any, Dict, List, Sequence, Tuple

from core.errors import InvalidSpec
from data_ingestion.loaders import load_family, load_section
from data_ingestion.schemas import RunConfig
from degeneration.family import PeriodFamily, SectionSpec, family_period, family_trop
from degeneration.fit import CSV_COLUMNS, FitResult, invariant_asymptotic_fit
from degeneration.limits import alpha_of_section, det_im_limit, det_im_probe, theta_limit_probe
from theta.invariant import MONTE_CARLO

logger = logging.getLogger(__name__)


def _section(config: RunConfig, fam: PeriodFamily) -> SectionSpec:
    """截面来自 --other 指定的 JSON，或者直接由 --a/--b 给出。"""
    if config.other is not None:
        section = load_section(config.other)
    else:
        section = SectionSpec(tuple(config.a), tuple(config.b))
    if len(section.a) != fam.g or len(section.b) != fam.g:
        raise InvalidSpec(f"截面坐标的长度必须等于 g = {fam.g}", g=fam.g)
    return section


def _require_t(config: RunConfig) -> List[float]:
    if not config.t:
        raise InvalidSpec(f"命令 {config.command} 需要至少一个 --t")
    return list(config.t)


def period_report(config: RunConfig) -> Dict[str, Any]:
    fam = load_family(config.input)
    t_values = _require_t(config)
    periods = [{"t": t, "tau": family_period(fam, t, config.branch).tau} for t in t_values]
    return {
        "command": config.command,
        "family": fam.name,
        "g": fam.g,
        "periods": periods,
        "det_im_limit": det_im_limit(fam),
        "det_im_probes": det_im_probe(fam, t_values, config.branch),
    }


def trop_report(config: RunConfig) -> Dict[str, Any]:
    fam = load_family(config.input)
    trop = family_trop(fam, _section(config, fam))
    return {
        "command": config.command,
        "point": list(trop.point.x),
        "T": trop.T,
        "minimizers": sorted(list(n) for n in trop.minimizers),
    }


def alpha_report(config: RunConfig) -> Dict[str, Any]:
    fam = load_family(config.input)
    result = alpha_of_section(fam, _section(config, fam), config.tol)
    return {
        "command": config.command,
        "alpha": result.alpha,
        "beta": result.beta,
        "T": result.T,
        "minimizers": sorted(list(n) for n in result.minimizers),
    }


def probe_report(config: RunConfig) -> Dict[str, Any]:
    fam = load_family(config.input)
    section = _section(config, fam)
    probes = theta_limit_probe(fam, section, _require_t(config), config.branch, config.tol)
    alpha = alpha_of_section(fam, section, config.tol).alpha
    return {
        "command": config.command,
        "alpha": alpha,
        "probes": probes,
        "deviations": [abs(p.normalized_value - alpha) for p in probes],
    }


def fit_report(config: RunConfig) -> FitResult:
    fam = load_family(config.input)
    return invariant_asymptotic_fit(
        fam,
        _require_t(config),
        integrator=config.method or MONTE_CARLO,
        samples=config.samples,
        seed=config.seed,
        workers=config.workers,
        branch=config.branch,
        correction=config.correction,
    )


def fit_table(result: FitResult) -> Tuple[Sequence[str], List[Tuple[float, ...]]]:
    rows = [(r.abs_t, r.L, r.I_estimate, r.I_stderr, r.model_value, r.residual) for r in result.rows]
    return CSV_COLUMNS, rows


def run(config: RunConfig) -> Any:
    handlers = {
        "family period": period_report,
        "family trop": trop_report,
        "family alpha": alpha_report,
        "family probe": probe_report,
        "family fit": fit_report,
    }
    return handlers[config.command](config)
