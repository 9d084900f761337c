"""
Tests for the photocount command line.

Tests cover:
- Each subcommand end to end through an output file
- JSON and CSV carrying identical numbers
- Exit codes for usage, configuration and computation failures
"""

import csv
import io
import logging

import orjson
import pytest

from photocount import cli
from photocount.config import reset_settings
from photocount.exceptions import NumericalDegradationError

MODEL = ["--nu", "1", "--sigma", "0.1", "--t-phys", "0.5"]


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    for name in ("PHOTOCOUNT_FORMAT", "PHOTOCOUNT_CONFIG", "PHOTOCOUNT_ORDER"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    # setup_logging replaces the root handlers with one bound to the captured stderr
    root.handlers[:] = handlers
    root.setLevel(level)
    reset_settings()


def run_json(tmp_path, *argv):
    out = tmp_path / "out.json"
    code = cli.main([*argv, "--output", str(out)])
    return code, orjson.loads(out.read_bytes())


def run_csv(tmp_path, *argv):
    out = tmp_path / "out.csv"
    code = cli.main([*argv, "--format", "csv", "--output", str(out)])
    text = out.read_bytes().decode("utf-8")
    assert "\r" not in text
    return code, list(csv.DictReader(io.StringIO(text)))


class TestCommands:
    def test_moments(self, tmp_path):
        code, doc = run_json(tmp_path, "moments", *MODEL, "--order", "3")
        assert code == cli.EXIT_OK
        assert doc["schema"] == "photocount/1"
        assert doc["command"] == "moments"
        assert doc["params"]["tau"] == 0.5
        assert doc["route"] == "direct-series"
        assert [r["n"] for r in doc["rows"]] == [0, 1, 2, 3]
        assert doc["rows"][1]["moment"] == pytest.approx(0.05, rel=1e-13)
        assert doc["rows"][2]["moment"] == pytest.approx(0.0043394, rel=1e-4)

    def test_moments_order_zero(self, tmp_path):
        code, doc = run_json(tmp_path, "moments", *MODEL, "--order", "0")
        assert code == cli.EXIT_OK
        assert doc["rows"] == [{"n": 0, "x": 1.0, "moment": 1.0}]

    def test_moments_multiprecision(self, tmp_path):
        code, doc = run_json(tmp_path, "moments", *MODEL, "--order", "4", "--precision", "mp", "--dps", "40")
        assert code == cli.EXIT_OK
        assert doc["rows"][1]["moment"] == pytest.approx(0.05, rel=1e-15)

    def test_moments_to_stdout(self, capsysbinary):
        assert cli.main(["moments", *MODEL, "--order", "1"]) == cli.EXIT_OK
        doc = orjson.loads(capsysbinary.readouterr().out)
        assert doc["rows"][1]["moment"] == pytest.approx(0.05)

    def test_dist(self, tmp_path):
        code, doc = run_json(tmp_path, "dist", *MODEL, "--order", "3")
        assert code == cli.EXIT_OK
        assert doc["zeta"] == pytest.approx(0.2338, abs=1e-4)
        assert doc["bound_available"] is True
        assert doc["negative_mass"] is False
        assert sum(r["probability"] for r in doc["rows"]) == pytest.approx(1.0, abs=1e-12)

    def test_bound(self, tmp_path):
        code, doc = run_json(tmp_path, "bound", *MODEL, "--order", "3")
        assert code == cli.EXIT_OK
        assert [r["N"] for r in doc["rows"]] == [0, 1, 2, 3]
        assert doc["rows"][3]["bound"] == pytest.approx(0.0948, abs=5e-4)
        assert doc["prefactor"] > 1

    def test_bound_unavailable(self, tmp_path):
        code, doc = run_json(tmp_path, "bound", "--nu", "1", "--sigma", "1", "--t-phys", "1", "--order", "2")
        assert code == cli.EXIT_OK
        assert all(r["bound"] is None and r["available"] is False for r in doc["rows"])

    def test_simulate(self, tmp_path):
        code, doc = run_json(
            tmp_path, "simulate", *MODEL, "--samples", "1000", "--steps", "16", "--seed", "0x2a", "--workers", "1",
        )
        assert code == cli.EXIT_OK
        assert doc["seed"] == 42
        assert [r["n"] for r in doc["rows"]] == [0, 1, 2, 3]
        assert all(r["stderr"] > 0 for r in doc["rows"])

    def test_simulate_is_reproducible(self, tmp_path):
        argv = ("simulate", *MODEL, "--samples", "2000", "--steps", "8", "--seed", "7")
        _, first = run_json(tmp_path, *argv, "--workers", "1")
        _, second = run_json(tmp_path, *argv, "--workers", "3")
        assert first == second

    def test_verify(self, tmp_path):
        code, doc = run_json(tmp_path, "verify", "--tau", "0.5,1", "--max-m", "8")
        assert code == cli.EXIT_OK
        assert doc["passed"] is True
        names = [r["check"] for r in doc["rows"]]
        assert "inequalities[tau=0.5]" in names
        assert "explicit-fixtures" in names

    def test_verify_reports_failure(self, tmp_path, monkeypatch):
        from photocount import verify

        monkeypatch.setattr(verify, "TWO_PATH_TOL", 0.0)
        code, doc = run_json(tmp_path, "verify", "--tau", "0.5", "--max-m", "4")
        assert code == cli.EXIT_VERIFY_FAILED
        assert doc["passed"] is False


class TestFormats:
    def test_sweep_json_and_csv_agree(self, tmp_path):
        argv = ("sweep", "--tau-grid", "0.5,1", "--sigma-grid", "0.1", "--orders", "2,3")
        code, doc = run_json(tmp_path, *argv)
        assert code == cli.EXIT_OK
        code, rows = run_csv(tmp_path, *argv)
        assert code == cli.EXIT_OK
        assert len(rows) == len(doc["rows"]) == 2 * (3 + 4)
        for json_row, csv_row in zip(doc["rows"], rows):
            assert float(csv_row["probability"]) == json_row["probability"]
            assert float(csv_row["zeta"]) == json_row["zeta"]
            assert int(csv_row["N"]) == json_row["N"]

    def test_csv_broadcasts_scalars(self, tmp_path):
        code, rows = run_csv(tmp_path, "dist", *MODEL, "--order", "2")
        assert code == cli.EXIT_OK
        assert len(rows) == 3
        assert {r["nu"] for r in rows} == {"1"}
        assert rows[0]["negative_mass"] == "false"


class TestExitCodes:
    @pytest.mark.parametrize("argv", [
        ["moments", "--nu", "-1", "--sigma", "0.1", "--t-phys", "0.5"],
        ["moments", "--nu", "1", "--sigma", "0.1"],
        ["verify", "--tau", "0"],
        ["simulate", *MODEL, "--samples", "10"],
        ["simulate", *MODEL, "--seed", "-3"],
        ["frobnicate"],
    ])
    def test_usage_errors(self, argv):
        with pytest.raises(SystemExit) as info:
            cli.main(argv)
        assert info.value.code == cli.EXIT_USAGE

    def test_missing_config_file(self, tmp_path):
        code = cli.main(["--config", str(tmp_path / "absent.json"), "moments", *MODEL])
        assert code == cli.EXIT_USAGE

    def test_invalid_config_value(self, tmp_path):
        config = tmp_path / "settings.json"
        config.write_text('{"simulation": {"block_size": 0}}')
        assert cli.main(["--config", str(config), "moments", *MODEL]) == cli.EXIT_USAGE

    def test_computation_error(self, monkeypatch, capsys):
        async def failing(args):
            raise NumericalDegradationError("moment M_9 lost its sign", "use the multiprecision backend")

        monkeypatch.setitem(cli.COMMAND_HANDLERS, "moments", failing)
        assert cli.main(["moments", *MODEL]) == cli.EXIT_COMPUTATION
        assert "lost its sign" in capsys.readouterr().err
