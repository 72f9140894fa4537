"""Integration tests for the command-line front end."""

import json
import math

import numpy as np
import pandas as pd
import pytest

from tangle_response import __version__
from tangle_response.cli import EXIT_CHECK_FAILED, EXIT_IO, EXIT_OK, EXIT_USAGE, main
from tangle_response.sweeps import FIG1_COLUMNS, FIG2_COLUMNS, FIG3_COLUMNS

from tests.utils import read_csv_lines


@pytest.mark.integration
class TestReport:
    """tangle-response report"""

    def test_ghz_report(self, capsys):
        code = main(["report", "--alpha", str(math.pi / 2), "--beta", str(math.pi / 4)])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["eta"] == pytest.approx(4.0, abs=1e-10)
        assert data["tau"] == pytest.approx(1.0, abs=1e-12)
        assert len(data["omega_moduli"]) == 4

    def test_out_of_range_angle(self):
        assert main(["report", "--alpha", "2.0", "--beta", "0.1"]) == EXIT_USAGE

    def test_missing_argument(self):
        with pytest.raises(SystemExit) as exc:
            main(["report", "--alpha", "0.3"])
        assert exc.value.code == EXIT_USAGE

    def test_writes_file(self, tmp_path):
        out = tmp_path / "report.json"
        assert main(["report", "--alpha", "0.0", "--beta", "0.0", "--out", str(out)]) == EXIT_OK
        assert json.loads(out.read_text())["eta"] == pytest.approx(4 / 3, abs=1e-10)

    def test_unwritable_output(self, tmp_path):
        out = tmp_path / "missing" / "report.json"
        assert main(["report", "--alpha", "0.3", "--beta", "0.2", "--out", str(out)]) == EXIT_IO


@pytest.mark.integration
class TestFigures:
    """Figure-data subcommands."""

    def test_fig3_csv(self, tmp_path):
        out = tmp_path / "fig3.csv"
        assert main(["fig3", "--out", str(out)]) == EXIT_OK
        lines = read_csv_lines(out)
        assert lines[0].startswith(f"# tangle-response {__version__} fig3 seed=0")
        assert lines[1] == ",".join(FIG3_COLUMNS)
        assert len(lines) == 2 + 2 * 101
        assert all(line.endswith("True") for line in lines[2:])

    def test_fig2_json(self, tmp_path):
        out = tmp_path / "fig2.json"
        assert main(["fig2", "--grid", "3", "--format", "json", "--out", str(out)]) == EXIT_OK
        doc = json.loads(out.read_text())
        assert doc["version"] == __version__
        assert doc["meta"]["command"] == "fig2"
        assert len(doc["rows"]) == 6
        assert set(doc["rows"][0]) == set(FIG2_COLUMNS)
        ghz = [r for r in doc["rows"] if r["family"] == "G"][-1]
        assert ghz["avg_decay"] == pytest.approx(4.0, abs=1e-6)

    def test_fig1_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["fig1", "--grid", "3", "--seed", "7", "--out", str(a)]) == EXIT_OK
        assert main(["fig1", "--grid", "3", "--seed", "7", "--out", str(b)]) == EXIT_OK
        assert a.read_bytes() == b.read_bytes()
        lines = read_csv_lines(a)
        assert lines[1] == ",".join(FIG1_COLUMNS)

    def test_fig1_seed_changes_random_cloud(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["fig1", "--grid", "3", "--seed", "1", "--out", str(a)])
        main(["fig1", "--grid", "3", "--seed", "2", "--out", str(b)])
        assert a.read_bytes() != b.read_bytes()

    def test_fig1_rows_within_envelope(self, tmp_path):
        out = tmp_path / "fig1.csv"
        assert main(["fig1", "--grid", "4", "--seed", "3", "--out", str(out)]) == EXIT_OK
        df = pd.read_csv(out, comment="#")
        assert len(df) > 0
        lower = 2 * df["tau"] + 2 * np.sqrt(df["tau"])
        upper = 2 * df["tau"] + 2 * df["negativity"]
        assert (df["eta"] >= lower - 1e-9).all()
        assert (df["eta"] <= upper + 1e-9).all()
        ghz = df[df["family"] == "G"]
        assert np.allclose(ghz["eta"], lower[ghz.index], atol=1e-8)


@pytest.mark.integration
class TestRoofAndCritical:
    """Oracle and critical-noise subcommands."""

    def test_bad_state_spec(self):
        assert main(["roof", "--state", "4q:0.1", "--q", "0.1"]) == EXIT_USAGE

    def test_non_numeric_state_spec(self):
        assert main(["roof", "--state", "2q:abc", "--q", "0.1"]) == EXIT_USAGE

    def test_ensemble_smaller_than_rank(self):
        # W-type noise gives a rank-3 two-qubit state
        assert main(["roof", "--state", "2q:0.5", "--q", "0.1", "--m", "2"]) == EXIT_USAGE

    def test_two_qubit_roof(self, capsys):
        code = main(["roof", "--state", f"2q:{math.pi / 4}", "--q", "0.1", "--restarts", "4"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["schema"] == "tangle-response/1"
        assert data["ansatz"] == pytest.approx(0.8, abs=1e-10)
        assert data["m"] == 4

    def test_critical_ghz(self, capsys):
        assert main(["critical", "--family", "G", "--beta", str(math.pi / 4)]) == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["q_c"] == pytest.approx(0.25, abs=1e-10)

    def test_critical_requires_param(self):
        assert main(["critical", "--family", "J"]) == EXIT_USAGE


@pytest.mark.integration
class TestVerify:
    """tangle-response verify"""

    def test_selected_checks_pass(self, capsys):
        code = main(["verify", "--check", "lrt_fixed_points", "--check", "two_qubit_unification"])
        assert code == EXIT_OK
        data = json.loads(capsys.readouterr().out)
        assert data["passed"] is True
        assert [c["name"] for c in data["checks"]] == ["two_qubit_unification", "lrt_fixed_points"]

    def test_negative_tolerance_fails(self, capsys):
        code = main(["verify", "--check", "lrt_fixed_points", "--tol-scale", "-1"])
        assert code == EXIT_CHECK_FAILED
        captured = capsys.readouterr()
        assert json.loads(captured.out)["passed"] is False
        assert "lrt_fixed_points" in captured.err

    def test_unknown_check(self):
        assert main(["verify", "--check", "no_such_check"]) == EXIT_USAGE
