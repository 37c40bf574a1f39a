# main.py

import logging
from pathlib import Path
from typing import List, Optional

import typer

from core import logger as core_logger
from workflows.dispatch import dispatch

logger = logging.getLogger(__name__)

cli = typer.Typer(help="trop-theta: 热带 theta、退化周期族与度量图不变量的命令行工具。")
trop_app = typer.Typer(help="正定格上的热带 theta 函数。")
theta_app = typer.Typer(help="Riemann theta 函数与 I(A, Theta)。")
family_app = typer.Typer(help="退化周期族。")
graph_app = typer.Typer(help="极化度量图的不变量。")
bounds_app = typer.Typer(help="算术下界。")
cli.add_typer(trop_app, name="trop")
cli.add_typer(theta_app, name="theta")
cli.add_typer(family_app, name="family")
cli.add_typer(graph_app, name="graph")
cli.add_typer(bounds_app, name="bounds")


@cli.callback()
def main_callback(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="日志级别，默认读取配置中的 LOG_LEVEL。")
):
    """
    初始化日志系统。这个函数会在任何命令执行之前被自动调用。
    """
    core_logger.setup_logging(log_level)


def _run(command: str, **options) -> None:
    """组装 RunConfig 并分发；退出码与 dispatch 的返回值一致。"""
    config = {"command": command}
    config.update({k: v for k, v in options.items() if v is not None and v != []})
    code = dispatch(config)
    if code:
        raise typer.Exit(code=code)


# --- 共用的参数 ---
InputArg = typer.Argument(..., help="输入 JSON 文件。")
SeedOpt = typer.Option(None, "--seed", help="随机种子，默认读取配置中的 DEFAULT_SEED。")
SamplesOpt = typer.Option(None, "--samples", help="Monte-Carlo / 低差异序列的样本数。")
ResolutionOpt = typer.Option(None, "--resolution", help="求积分辨率 (网格每轴点数或序列点数)。")
MethodOpt = typer.Option(None, "--method", help="求积方法: grid / low-discrepancy / monte-carlo。")
TolOpt = typer.Option(None, "--tol", help="容差 (并列窗口、theta 截断误差或不等式检查)。")
SubdivisionsOpt = typer.Option(None, "--subdivisions", help="每条边的剖分段数。")
ExtrapolateOpt = typer.Option(None, "--extrapolate/--no-extrapolate", help="是否做 Richardson 外推。")
TOpt = typer.Option(None, "--t", help="参数 t (可重复)；复数写成 re,im 或 a+bj，例如 --t 1e-4,1e-5。")
AOpt = typer.Option(None, "--a", help="截面或点的 a 坐标 (可重复)。")
BOpt = typer.Option(None, "--b", help="截面或点的 b 坐标 (可重复)。")
BranchOpt = typer.Option(0, "--branch", help="log s 的分支。")
SectionOpt = typer.Option(None, "--section", help="截面 JSON 文件 ({\"a\": [...], \"b\": [...]})。")
C1Opt = typer.Option(None, "--c1", help="常数 c1(g)。")
C2Opt = typer.Option(None, "--c2", help="常数 c2(g)。")


# ==============================================================================
#  trop
# ==============================================================================

@trop_app.command(name="moment", help="热带矩 I(Sigma)。")
def trop_moment(input: Path = InputArg, method: Optional[str] = MethodOpt, resolution: Optional[int] = ResolutionOpt,
                seed: Optional[int] = SeedOpt):
    _run("trop moment", input=input, method=method, resolution=resolution, seed=seed)


@trop_app.command(name="value", help="||Psi||(x) 与全部极小点。")
def trop_value(input: Path = InputArg,
               x: List[float] = typer.Option(..., "--x", help="环面坐标 (可重复)。"),
               tol: Optional[float] = TolOpt):
    _run("trop value", input=input, x=x, tol=tol)


@trop_app.command(name="isometry", help="判断两个格是否等距。")
def trop_isometry(input: Path = InputArg,
                  other: Path = typer.Option(..., "--other", help="第二个格的 JSON 文件。")):
    _run("trop isometry", input=input, other=other)


# ==============================================================================
#  theta
# ==============================================================================

@theta_app.command(name="eval", help="theta(tau, a + tau b) 与 ||theta||。")
def theta_eval(input: Path = InputArg, a: Optional[List[float]] = AOpt, b: Optional[List[float]] = BOpt,
               tol: Optional[float] = TolOpt):
    _run("theta eval", input=input, a=a, b=b, tol=tol)


@theta_app.command(name="invariant", help="I(A, Theta) 的估计。")
def theta_invariant(input: Path = InputArg, method: Optional[str] = MethodOpt, samples: Optional[int] = SamplesOpt,
                    seed: Optional[int] = SeedOpt):
    _run("theta invariant", input=input, method=method, samples=samples, seed=seed)


@theta_app.command(name="l2", help="||theta||^2 的积分 (理论值 2^{-g/2})。")
def theta_l2(input: Path = InputArg, method: Optional[str] = MethodOpt, samples: Optional[int] = SamplesOpt,
             seed: Optional[int] = SeedOpt):
    _run("theta l2", input=input, method=method, samples=samples, seed=seed)


# ==============================================================================
#  family
# ==============================================================================

@family_app.command(name="period", help="T_f(t) 以及 det Im T_f(t) 的探针。")
def family_period(input: Path = InputArg, t: Optional[List[str]] = TOpt, branch: int = BranchOpt):
    _run("family period", input=input, t=t, branch=branch)


@family_app.command(name="trop", help="截面的热带化 trop(z) 与 T。")
def family_trop(input: Path = InputArg, section: Optional[Path] = SectionOpt, a: Optional[List[float]] = AOpt,
                b: Optional[List[float]] = BOpt):
    _run("family trop", input=input, other=section, a=a, b=b)


@family_app.command(name="alpha", help="极限常数 alpha(a, b)。")
def family_alpha(input: Path = InputArg, section: Optional[Path] = SectionOpt, a: Optional[List[float]] = AOpt,
                 b: Optional[List[float]] = BOpt, tol: Optional[float] = TolOpt):
    _run("family alpha", input=input, other=section, a=a, b=b, tol=tol)


@family_app.command(name="probe", help="归一化的 ||theta||^2 沿 t 序列的取值。")
def family_probe(input: Path = InputArg, t: Optional[List[str]] = TOpt, section: Optional[Path] = SectionOpt,
                 a: Optional[List[float]] = AOpt, b: Optional[List[float]] = BOpt, branch: int = BranchOpt,
                 tol: Optional[float] = TolOpt):
    _run("family probe", input=input, t=t, other=section, a=a, b=b, branch=branch, tol=tol)


@family_app.command(name="fit", help="I(A_t) ~ c0 + c1 L - c2 log L 的拟合。")
def family_fit(input: Path = InputArg, t: Optional[List[str]] = TOpt, method: Optional[str] = MethodOpt,
               samples: Optional[int] = SamplesOpt, seed: Optional[int] = SeedOpt, branch: int = BranchOpt,
               workers: Optional[int] = typer.Option(None, "--workers", help="并行线程数。"),
               correction: Optional[bool] = typer.Option(None, "--correction/--no-correction",
                                                         help="是否加入 |t|^lambda 修正列，默认读取配置。"),
               format: str = typer.Option("json", "--format", help="输出格式: json / csv。")):
    _run("family fit", input=input, t=t, method=method, samples=samples, seed=seed, branch=branch, workers=workers,
         correction=correction, format=format)


# ==============================================================================
#  graph
# ==============================================================================

@graph_app.command(name="invariants", help="delta, epsilon, phi, tau 与 I(Jac)。")
def graph_invariants(input: Path = InputArg, subdivisions: Optional[int] = SubdivisionsOpt,
                     extrapolate: Optional[bool] = ExtrapolateOpt, method: Optional[str] = MethodOpt,
                     resolution: Optional[int] = ResolutionOpt):
    _run("graph invariants", input=input, subdivisions=subdivisions, extrapolate=extrapolate, method=method,
         resolution=resolution)


@graph_app.command(name="jacobian", help="热带 Jacobian 的 Gram 矩阵与热带矩。")
def graph_jacobian(input: Path = InputArg, method: Optional[str] = MethodOpt,
                   resolution: Optional[int] = ResolutionOpt, seed: Optional[int] = SeedOpt):
    _run("graph jacobian", input=input, method=method, resolution=resolution, seed=seed)


@graph_app.command(name="identity", help="检查 delta + epsilon = 12 I(Jac) + 2 phi 及相关不等式。")
def graph_identity(input: Path = InputArg, subdivisions: Optional[int] = SubdivisionsOpt,
                   extrapolate: Optional[bool] = ExtrapolateOpt, tol: Optional[float] = TolOpt,
                   method: Optional[str] = MethodOpt, resolution: Optional[int] = ResolutionOpt):
    _run("graph identity", input=input, subdivisions=subdivisions, extrapolate=extrapolate, tol=tol, method=method,
         resolution=resolution)


@graph_app.command(name="resistance", help="两点间的有效电阻，或每条边的 r(e)。")
def graph_resistance(input: Path = InputArg,
                     point: Optional[List[str]] = typer.Option(None, "--point",
                                                               help="顶点 id 或 e<k>:<offset> (给两次)。")):
    _run("graph resistance", input=input, points=point)


# ==============================================================================
#  bounds
# ==============================================================================

@bounds_app.command(name="curve", help="delta(X), phi(X), Noether 残差与下界。")
def bounds_curve(input: Path = InputArg, c1: Optional[float] = C1Opt, c2: Optional[float] = C2Opt,
                 subdivisions: Optional[int] = SubdivisionsOpt):
    _run("bounds curve", input=input, c1=c1, c2=c2, subdivisions=subdivisions)


@bounds_app.command(name="tautological", help="重言式循环的高度下界。")
def bounds_tautological(input: Path = InputArg, r: int = typer.Option(..., "--r", help="循环的维数 r。"),
                        m: List[int] = typer.Option(..., "--m", help="m 向量 (可重复)。"),
                        c1: Optional[float] = C1Opt, c2: Optional[float] = C2Opt,
                        subdivisions: Optional[int] = SubdivisionsOpt):
    _run("bounds tautological", input=input, r=r, m=m, c1=c1, c2=c2, subdivisions=subdivisions)


@bounds_app.command(name="estimates", help="m 向量的初等估计与精确系数。")
def bounds_estimates(m: Optional[List[int]] = typer.Option(None, "--m", help="m 向量 (可重复)。"),
                     g: Optional[int] = typer.Option(None, "--g", help="亏格 g。")):
    _run("bounds estimates", m=m, g=g)


if __name__ == "__main__":
    # 程序的主入口，将执行交给Typer
    cli()
