# tests/helpers.py

from core import config as config_module
from data_ingestion.loaders import load_graph
from graph.metrized import validate_graph, validate_polarization


def graph_fixture(name: str):
    return load_graph(config_module.GRAPH_FIXTURES_DIR / f"{name}.json")


def make_graph(vertices, edges, q=None, name=""):
    graph = validate_graph(vertices, edges, name)
    return graph, validate_polarization(graph, q or {})
