# workflows/dispatch.py

"""
命令分发: 解析 RunConfig，调用对应的工作流，把报告写到 stdout。

退出码: 0 成功，1 输入不合法，2 数值计算失败 (未归类的异常也记为 2)。错误以 JSON 形式写到 stderr。
"""

import json
import logging
import sys
from typing import IO, Any, Callable, Dict, Mapping, Union

from core import config as config_module
from core.errors import InvalidSpec, NumericalError, TropThetaError
from data_ingestion.loaders import parse_model
from data_ingestion.schemas import RunConfig
from utils import report_writer
from workflows import bounds_flow, family_flow, graph_flow, theta_flow, trop_flow

logger = logging.getLogger(__name__)

FLOWS: Dict[str, Callable[[RunConfig], Any]] = {
    "trop": trop_flow.run,
    "theta": theta_flow.run,
    "family": family_flow.run,
    "graph": graph_flow.run,
    "bounds": bounds_flow.run,
}

CSV_TABLES = {
    "family fit": family_flow.fit_table,
}


def _emit(config: RunConfig, report: Any, stdout: IO[str]) -> None:
    if config.format == "csv":
        if config.command not in CSV_TABLES:
            raise InvalidSpec(f"命令 {config.command} 不支持 CSV 输出", command=config.command)
        columns, rows = CSV_TABLES[config.command](report)
        report_writer.write_csv(columns, rows, stdout)
    else:
        report_writer.write_json(report, stdout)


def dispatch(config: Union[RunConfig, Mapping[str, Any]], stdout: IO[str] | None = None,
             stderr: IO[str] | None = None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    config_module.reload_config()
    try:
        if not isinstance(config, RunConfig):
            config = parse_model(RunConfig, dict(config), "命令行参数")
        group = config.command.split()[0]
        logger.info(f"🚀 执行命令: {config.command}")
        report = FLOWS[group](config)
        _emit(config, report, stdout)
        logger.info(f"✅ 命令 {config.command} 完成")
        return 0
    except TropThetaError as e:
        logger.error(f"❌ {type(e).__name__}: {e.message}", exc_info=True)
        stderr.write(json.dumps(report_writer.to_jsonable(e.to_dict()), sort_keys=True, ensure_ascii=False) + "\n")
        return e.exit_code
    except Exception as e:
        # 未归类的异常同样按错误 JSON 报告，退出码记为数值失败
        logger.error(f"❌ 未预期的异常 {type(e).__name__}: {e}", exc_info=True)
        error = {"error": type(e).__name__, "message": str(e)}
        stderr.write(json.dumps(error, sort_keys=True, ensure_ascii=False) + "\n")
        return NumericalError.exit_code
