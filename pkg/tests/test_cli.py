# tests/test_cli.py

import csv
import io
import json
import math
from fractions import Fraction

import pytest
from typer.testing import CliRunner

from core import config as config_module
from core.errors import SchemaError
from data_ingestion import loaders
from data_ingestion.loaders import parse_model
from data_ingestion.schemas import RunConfig
from degeneration.fit import CSV_COLUMNS
from main import cli
from utils import report_writer
from workflows import dispatch as dispatch_module
from workflows.dispatch import dispatch

FIXTURE_LOADERS = {
    "lattices": loaders.load_gram,
    "periods": loaders.load_period,
    "families": loaders.load_family,
    "sections": loaders.load_section,
    "graphs": loaders.load_graph,
    "curves": loaders.load_curve,
}


def run(config):
    stdout, stderr = io.StringIO(), io.StringIO()
    code = dispatch(config, stdout, stderr)
    return code, stdout.getvalue(), stderr.getvalue()


def lattice(name):
    return config_module.LATTICE_FIXTURES_DIR / f"{name}.json"


class TestDispatch:
    def test_trop_moment(self):
        code, out, _ = run({"command": "trop moment", "input": lattice("unit")})
        assert code == 0
        report = json.loads(out)
        assert report["estimate"] == pytest.approx(1 / 12, abs=1e-4)
        assert report["closed_form"] == {"num": 1, "den": 12}

    def test_trop_value(self):
        code, out, _ = run({"command": "trop value", "input": lattice("a2"), "x": [0.5, 0.5]})
        assert code == 0
        report = json.loads(out)
        assert report["value"] == pytest.approx(0.25, abs=1e-12)
        assert report["minimizers"] == [[-1, -1], [0, 0]]

    def test_trop_value_rank_mismatch(self):
        code, _, err = run({"command": "trop value", "input": lattice("a2"), "x": [0.5]})
        assert code == 1
        assert json.loads(err)["error"] == "RankMismatch"

    @pytest.mark.parametrize("bad", [math.nan, math.inf])
    def test_trop_value_non_finite(self, bad):
        code, out, err = run({"command": "trop value", "input": lattice("a2"), "x": [bad, 0.5]})
        assert code == 1
        assert out == ""
        error = json.loads(err)
        assert error["error"] == "SchemaError"
        assert error["position"] == "x.0"

    def test_unexpected_exception(self, monkeypatch):
        def broken(config):
            raise ZeroDivisionError("division by zero")

        monkeypatch.setitem(dispatch_module.FLOWS, "trop", broken)
        code, out, err = run({"command": "trop moment", "input": lattice("unit")})
        assert code == 2
        assert out == ""
        assert json.loads(err) == {"error": "ZeroDivisionError", "message": "division by zero"}

    def test_complex_t(self):
        path = config_module.FAMILY_FIXTURES_DIR / "tate.json"
        code, out, _ = run({"command": "family period", "input": path, "t": ["0,1e-4", 1e-4]})
        assert code == 0
        first, second = json.loads(out)["periods"]
        assert first["t"] == {"re": 0.0, "im": 1e-4}
        assert second["t"] == 1e-4
        # arg t = pi/2 把 Re tau 平移 1/4
        assert first["tau"][0][0]["re"] == pytest.approx(0.25, abs=1e-12)
        assert first["tau"][0][0]["im"] == pytest.approx(second["tau"][0][0]["im"], abs=1e-10)

    def test_unparseable_t(self):
        path = config_module.FAMILY_FIXTURES_DIR / "tate.json"
        code, _, err = run({"command": "family period", "input": path, "t": ["1e-4;2"]})
        assert code == 1
        assert json.loads(err)["error"] == "SchemaError"

    def test_trop_isometry(self):
        code, out, _ = run({"command": "trop isometry", "input": lattice("a2"), "other": lattice("a2_alt")})
        assert code == 0
        assert json.loads(out)["result"] == "isometric"

    def test_graph_identity(self):
        path = config_module.GRAPH_FIXTURES_DIR / "theta.json"
        code, out, _ = run({"command": "graph identity", "input": path})
        assert code == 0
        report = json.loads(out)
        assert report["identity_passed"]
        assert report["passed"]

    def test_graph_resistance_points(self):
        path = config_module.GRAPH_FIXTURES_DIR / "circle.json"
        code, out, _ = run({"command": "graph resistance", "input": path, "points": ["v0", "e0:0.5"]})
        assert code == 0
        assert json.loads(out)["resistance"] == pytest.approx(0.25, abs=1e-12)

    def test_bounds_estimates(self):
        code, out, _ = run({"command": "bounds estimates", "m": [2, -3], "g": 2})
        assert code == 0
        report = json.loads(out)
        assert report["estimates"]["sum_cross"] == -6
        assert report["coefficients"]["phi"] == {"num": 1, "den": 116}
        assert report["coefficients"]["omega"] == {"num": 1, "den": 581}

    def test_bounds_estimates_needs_arguments(self):
        code, _, err = run({"command": "bounds estimates"})
        assert code == 1
        assert json.loads(err)["error"] == "InvalidSpec"

    def test_bounds_curve(self):
        path = config_module.CURVE_FIXTURES_DIR / "synthetic_genus2.json"
        code, out, _ = run({"command": "bounds curve", "input": path, "c1": -1, "c2": 0.5})
        assert code == 0
        report = json.loads(out)
        assert report["noether_residual"] == pytest.approx(0.0, abs=1e-9)
        assert "omega_bound" in report

    def test_missing_input(self):
        code, _, err = run({"command": "trop moment"})
        assert code == 1
        assert json.loads(err)["error"] == "SchemaError"

    def test_unknown_command(self):
        code, _, _ = run({"command": "trop unknown", "input": lattice("unit")})
        assert code == 1

    def test_malformed_json(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text('{\n  "rank": 1,\n  "gram": [[1]\n}\n', encoding="utf-8")
        code, out, err = run({"command": "trop moment", "input": path})
        assert code == 1
        assert out == ""
        error = json.loads(err)
        assert error["error"] == "SchemaError"
        assert error["line"] == 4
        assert "column" in error

    def test_schema_violation(self, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text(json.dumps({"rank": 1, "gram": [[1]], "colour": "red"}), encoding="utf-8")
        code, _, err = run({"command": "trop moment", "input": path})
        assert code == 1
        assert "colour" in json.loads(err)["position"]

    def test_not_positive_definite(self, tmp_path):
        path = tmp_path / "indefinite.json"
        path.write_text(json.dumps({"rank": 2, "gram": [[1, 2], [2, 1]]}), encoding="utf-8")
        code, _, err = run({"command": "trop moment", "input": path})
        assert code == 1
        error = json.loads(err)
        assert error["error"] == "NotPositiveDefinite"
        assert error["pivot_index"] == 1

    def test_truncation_failure_exit_code(self, monkeypatch):
        monkeypatch.setitem(config_module.DEFAULT_CONFIG, "THETA_TERM_BUDGET", 1)
        path = config_module.PERIOD_FIXTURES_DIR / "i.json"
        code, _, err = run({"command": "theta eval", "input": path})
        assert code == 2
        assert json.loads(err)["error"] == "TruncationFailure"

    def test_byte_identical_output(self):
        config = {"command": "trop moment", "input": lattice("a2"), "method": "low-discrepancy",
                  "resolution": 4096, "seed": 3}
        assert run(config)[1] == run(config)[1]

    def test_byte_identical_invariant(self):
        config = {"command": "theta invariant", "input": config_module.PERIOD_FIXTURES_DIR / "i.json",
                  "samples": 5000, "seed": 9}
        first, second = run(config), run(config)
        assert first[0] == 0
        assert first[1] == second[1]


class TestCsvOutput:
    def test_family_fit_csv(self):
        config = {
            "command": "family fit",
            "input": config_module.FAMILY_FIXTURES_DIR / "tate.json",
            "t": [1e-1, 1e-2, 1e-3, 1e-4, 1e-5],
            "method": "low-discrepancy",
            "samples": 2048,
            "format": "csv",
        }
        code, out, _ = run(config)
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert tuple(rows[0]) == CSV_COLUMNS
        assert len(rows) == 6
        assert [float(r[0]) for r in rows[1:]] == pytest.approx([1e-1, 1e-2, 1e-3, 1e-4, 1e-5])

    def test_csv_rejected_elsewhere(self):
        code, _, err = run({"command": "trop moment", "input": lattice("unit"), "format": "csv"})
        assert code == 1
        assert json.loads(err)["error"] == "InvalidSpec"


class TestFixtures:
    @pytest.mark.parametrize("directory", sorted(FIXTURE_LOADERS))
    def test_every_fixture_loads(self, directory):
        paths = sorted((config_module.FIXTURES_DIR / directory).glob("*.json"))
        assert paths
        for path in paths:
            assert FIXTURE_LOADERS[directory](path) is not None, path.name


class TestReportWriter:
    def test_rounding(self):
        assert report_writer.to_jsonable(1 / 3, digits=3) == 0.333
        assert report_writer.to_jsonable(-0.0) == 0.0

    def test_fraction(self):
        assert report_writer.to_jsonable(Fraction(1, 116)) == {"num": 1, "den": 116}
        assert report_writer.to_jsonable(Fraction(4, 2)) == 2

    def test_non_finite(self):
        assert report_writer.to_jsonable([math.inf, -math.inf, math.nan]) == ["inf", "-inf", "nan"]

    def test_complex(self):
        assert report_writer.to_jsonable(1 + 2j) == {"re": 1.0, "im": 2.0}

    def test_sets_are_sorted(self):
        assert report_writer.to_jsonable({(1,), (0,)}) == [[0], [1]]

    def test_unknown_type(self):
        with pytest.raises(TypeError):
            report_writer.to_jsonable(object())

    def test_dumps_sorted_keys(self):
        assert report_writer.dumps({"b": 1, "a": 2}).index('"a"') < report_writer.dumps({"b": 1, "a": 2}).index('"b"')


class TestTyperApp:
    runner = CliRunner()

    def test_trop_moment(self):
        result = self.runner.invoke(cli, ["trop", "moment", str(lattice("unit"))])
        assert result.exit_code == 0

    def test_invalid_method(self):
        result = self.runner.invoke(cli, ["trop", "moment", str(lattice("unit")), "--method", "simpson"])
        assert result.exit_code == 1

    def test_bounds_estimates(self):
        result = self.runner.invoke(cli, ["bounds", "estimates", "--m", "1", "--m", "1"])
        assert result.exit_code == 0

    def test_complex_t_option(self):
        path = config_module.FAMILY_FIXTURES_DIR / "tate.json"
        result = self.runner.invoke(cli, ["family", "period", str(path), "--t", "1e-4+1e-5j", "--t", "0,1e-3"])
        assert result.exit_code == 0


class TestRunConfig:
    def test_t_forms(self):
        config = parse_model(RunConfig, {"command": "family period", "input": "tate.json",
                                         "t": ["1e-4+1e-5j", "2e-3, 0", 0.5, {"re": 0, "im": 0.1}]})
        assert config.t == [complex(1e-4, 1e-5), 2e-3, 0.5, 0.1j]
        assert isinstance(config.t[1], float)

    @pytest.mark.parametrize("field", ["x", "a", "b"])
    def test_coordinates_must_be_finite(self, field):
        with pytest.raises(SchemaError) as info:
            parse_model(RunConfig, {"command": "trop value", "input": "a2.json", field: [0.5, math.inf]})
        assert info.value.details["position"] == f"{field}.1"

    def test_nan_t_rejected(self):
        with pytest.raises(SchemaError):
            parse_model(RunConfig, {"command": "family period", "input": "tate.json", "t": ["nan"]})
