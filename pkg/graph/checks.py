# graph/checks.py

"""
恒等式 delta + epsilon = 12 I(Jac) + 2 phi 以及相关不等式的数值检查:

- Cinkir: delta <= 2g(7g+5)/(g-1)^2 * phi (g >= 2)
- 链: 0 <= delta + epsilon <= 3/2 delta + 2 phi <= (23g^2+11g+2)/(g-1)^2 * phi
- epsilon >= 0, tau >= 0
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List

from core import config as config_module
from graph.metrized import MetrizedGraph, Polarization
from graph.potential import GraphInvariants, graph_invariants

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class InequalityCheck:
    name: str
    slack: float
    passed: bool


@dataclass(frozen=True)
class IdentityReport:
    invariants: GraphInvariants
    residual: float
    relative_residual: float
    identity_passed: bool
    checks: List[InequalityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.identity_passed and all(c.passed for c in self.checks)

    def slacks(self) -> Dict[str, float]:
        return {c.name: c.slack for c in self.checks}


def cinkir_coefficient(g: int) -> Fraction:
    return Fraction(2 * g * (7 * g + 5), (g - 1) ** 2)


def chain_coefficient(g: int) -> Fraction:
    return Fraction(23 * g * g + 11 * g + 2, (g - 1) ** 2)


def identity_and_bounds_check(graph: MetrizedGraph, polarization: Polarization, subdivisions: int | None = None,
                              extrapolate: bool | None = None, tol: float | None = None,
                              rtol: float | None = None, moment_method: str | None = None,
                              moment_resolution: int | None = None) -> IdentityReport:
    current_config = config_module.get_current_config()
    tol = current_config["CHECK_TOLERANCE"] if tol is None else tol
    rtol = current_config["IDENTITY_RTOL"] if rtol is None else rtol

    inv = graph_invariants(graph, polarization, subdivisions, extrapolate, moment_method, moment_resolution)
    delta, epsilon, phi, tau, I = inv.as_tuple()
    residual = delta + epsilon - 12 * I - 2 * phi
    relative = abs(residual) / max(1.0, delta + epsilon)

    slacks = {"epsilon_nonnegative": epsilon, "tau_nonnegative": tau, "chain_lower": delta + epsilon}
    if inv.g >= 2:
        c3 = float(chain_coefficient(inv.g))
        slacks["cinkir"] = float(cinkir_coefficient(inv.g)) * phi - delta
        slacks["chain_middle"] = 1.5 * delta + 2 * phi - (delta + epsilon)
        slacks["chain_upper"] = c3 * phi - (1.5 * delta + 2 * phi)
        slacks["graph_phi_bound"] = c3 * phi - delta - epsilon
    else:
        logger.warning(f"亏格 g = {inv.g} < 2，跳过 Cinkir 不等式与不等式链的检查")

    checks = [InequalityCheck(name, value, value >= -tol) for name, value in slacks.items()]
    report = IdentityReport(inv, residual, relative, relative <= rtol, checks)
    status = "✅" if report.passed else "❌"
    logger.info(f"{status} 恒等式残差 {residual:.3e} (相对 {relative:.3e})，不等式 {sum(c.passed for c in checks)}/{len(checks)} 通过")
    return report
