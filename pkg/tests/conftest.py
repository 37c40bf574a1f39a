# tests/conftest.py

import logging

import numpy as np
import pytest

from core import config as config_module
from data_ingestion.loaders import load_family
from helpers import graph_fixture
from lattice.gram import validate_gram


@pytest.fixture(autouse=True)
def _restore_root_handlers():
    # 命令行测试会调用 setup_logging，把处理器挂到 CliRunner 的临时流上
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def fixtures_dir():
    return config_module.FIXTURES_DIR


# --- 格 ---

@pytest.fixture
def unit_lattice():
    return validate_gram([[1]])


@pytest.fixture
def a2_lattice():
    return validate_gram([[2, -1], [-1, 2]])


# --- 周期族 ---

@pytest.fixture
def tate_family():
    return load_family(config_module.FAMILY_FIXTURES_DIR / "tate.json")


@pytest.fixture
def elliptic_tate_family():
    return load_family(config_module.FAMILY_FIXTURES_DIR / "elliptic_tate.json")


@pytest.fixture
def degree2_family():
    return load_family(config_module.FAMILY_FIXTURES_DIR / "degree2.json")


# --- 度量图 ---

@pytest.fixture
def circle():
    return graph_fixture("circle")


@pytest.fixture
def theta_graph():
    return graph_fixture("theta")


@pytest.fixture
def dumbbell():
    return graph_fixture("dumbbell")


@pytest.fixture
def k4():
    return graph_fixture("k4")
