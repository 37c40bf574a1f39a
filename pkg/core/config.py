# core/config.py

import os
import json
import logging
from functools import lru_cache
from pathlib import Path

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

# --- 项目根目录 ---
BASE_DIR = Path(__file__).resolve().parent.parent

# 允许通过 .env 指定额外的覆盖文件 (TROP_THETA_CONFIG)
load_dotenv(BASE_DIR / ".env")

# --- 1. 路径配置 (通常不动态修改) ---
STORAGE_DIR = BASE_DIR / "storage"
REPORTS_DIR = STORAGE_DIR / "reports"
LOGS_DIR = STORAGE_DIR / "logs"
FIXTURES_DIR = BASE_DIR / "fixtures"
GRAPH_FIXTURES_DIR = FIXTURES_DIR / "graphs"
FAMILY_FIXTURES_DIR = FIXTURES_DIR / "families"
CURVE_FIXTURES_DIR = FIXTURES_DIR / "curves"
LATTICE_FIXTURES_DIR = FIXTURES_DIR / "lattices"
PERIOD_FIXTURES_DIR = FIXTURES_DIR / "periods"
SECTION_FIXTURES_DIR = FIXTURES_DIR / "sections"
CONFIG_OVERRIDE_PATH = BASE_DIR / "config_override.json"
CONFIG_ENV_VAR = "TROP_THETA_CONFIG"


# --- 2. 默认配置字典 ---
# 所有可调的数值参数都集中在这里，命令行参数优先于这里的值
DEFAULT_CONFIG = {
    # 可复现性
    "DEFAULT_SEED": 20240611,

    # Lattice / tropical theta
    "TIE_TOLERANCE": 1e-9,          # 极小值并列窗口 (绝对值)
    "SYMMETRY_RTOL": 1e-12,         # 浮点 Gram 矩阵的对称性容差
    "ISOMETRY_MAX_RANK": 4,
    "MOMENT_GRID_RESOLUTION": {"1": 4096, "2": 512},  # 其余秩使用低差异序列
    "MOMENT_QMC_POINTS": 2 ** 16,
    "MOMENT_CHUNK": 2 ** 16,        # 向量化求值时每批的点数

    # Riemann theta
    "THETA_MAX_GENUS": 5,
    "THETA_EPS": 1e-12,
    "THETA_TERM_BUDGET": 200000,    # 椭球枚举的最大项数

    # Monte-Carlo 积分 I(A, Theta)
    "MC_SAMPLES": 10 ** 6,
    "MC_BATCH_SIZE": 20000,
    "MC_MIN_SAMPLES": 1000,
    "THETA_ZERO_REDRAW": 1e-13,
    "NONFINITE_FRACTION": 1e-4,

    # 渐近拟合
    "FIT_MAX_CONDITION": 1e10,
    "FIT_MIN_POINTS": 5,
    "FIT_MIN_DECADES": 4,
    "FIT_WORKERS": 1,
    "FIT_EXPONENTIAL_CORRECTION": True,  # 设计矩阵中加入 |t|^lambda 修正列

    # 度量图
    "GREEN_SUBDIVISIONS": 64,
    "GREEN_EXTRAPOLATE": True,
    "MEASURE_MASS_TOL": 1e-9,

    # 检查与报告
    "CHECK_TOLERANCE": 1e-6,
    "IDENTITY_RTOL": 1e-3,
    "FLOAT_SIG_DIGITS": 12,
    "LOG_LEVEL": "INFO",
}


def _merge_override(config: dict, path: Path) -> None:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            override_config = json.load(f)
        if not isinstance(override_config, dict):
            raise ValueError("覆盖文件的顶层必须是 JSON 对象")
        config.update(override_config)
    except (json.JSONDecodeError, IOError, ValueError) as e:
        # 文件存在但格式错误或无法读取，忽略并使用默认值
        logger.warning(f"忽略无法解析的配置覆盖文件 '{path}': {e}")


# --- 3. 动态配置加载函数 ---
@lru_cache(maxsize=8)
def _load_overrides(env_path: str | None) -> dict:
    """读取一次覆盖文件；结果按环境变量的取值缓存，调用方不得修改返回的字典。"""
    overrides = {}
    if CONFIG_OVERRIDE_PATH.exists():
        _merge_override(overrides, CONFIG_OVERRIDE_PATH)
    if env_path and Path(env_path).exists():
        _merge_override(overrides, Path(env_path))
    return overrides


def reload_config() -> None:
    """丢弃缓存的覆盖文件内容，下一次 get_current_config() 重新读取。"""
    _load_overrides.cache_clear()


def get_current_config() -> dict:
    """
    获取当前的有效配置。
    先复制默认配置，再依次用 config_override.json 和
    环境变量 TROP_THETA_CONFIG 指向的文件进行覆盖。
    覆盖文件只在第一次调用或 reload_config() 之后读取。
    """
    config = DEFAULT_CONFIG.copy()
    config.update(_load_overrides(os.environ.get(CONFIG_ENV_VAR)))
    return config


def moment_resolution_for_rank(rank: int, config: dict | None = None) -> int | None:
    """网格求积在该秩下的默认分辨率；返回 None 表示应改用低差异序列。"""
    config = config or get_current_config()
    return config["MOMENT_GRID_RESOLUTION"].get(str(rank))


# --- 4. 确保目录存在 ---
def create_directories():
    """Ensures all necessary storage directories exist."""
    dirs = [STORAGE_DIR, REPORTS_DIR, LOGS_DIR]
    for dir_path in dirs:
        dir_path.mkdir(parents=True, exist_ok=True)
