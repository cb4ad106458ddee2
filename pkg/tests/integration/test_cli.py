"""Integration tests for the sbo-workbench command line."""
import json

import pytest

from sbo_workbench.cli import main


@pytest.mark.integration
class TestConstruct:
    """sbo-workbench construct."""

    def test_d3_latex(self, capsys):
        assert main(["construct", "--n", "2", "--op", "D", "--i", "3"]) == 0
        assert "g_{" in capsys.readouterr().out

    def test_l_as_json(self, capsys):
        assert main(["construct", "--n", "1", "--op", "L", "--k", "1", "--output", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["n"] == 1
        assert data["operator"].startswith("L_")
        assert data["terms"]

    def test_numeric_lambda(self, capsys):
        assert main(["construct", "--n", "1", "--op", "F", "--i", "1", "--lambda", "1/2,3", "--output", "text"]) == 0
        assert capsys.readouterr().out.startswith("F_1 = ")

    def test_index_out_of_range(self, capsys):
        assert main(["construct", "--n", "2", "--op", "D", "--i", "5"]) == 2
        assert "index out of range" in capsys.readouterr().err

    def test_missing_index(self):
        assert main(["construct", "--op", "F"]) == 2

    def test_l_needs_k(self):
        assert main(["construct", "--op", "L"]) == 2


@pytest.mark.integration
class TestVerify:
    """sbo-workbench verify."""

    def test_restriction_writes_report(self, tmp_path, capsys):
        code = main(["verify", "--suite", "restriction", "--n", "1", "--no-timing", "--output-dir", str(tmp_path)])
        assert code == 0
        data = json.loads((tmp_path / "restriction.json").read_text())
        assert data["status"] == "PASS"
        assert json.loads(capsys.readouterr().out) == data

    def test_report_directory_from_environment(self, report_dir):
        assert main(["verify", "--suite", "numeric-probes", "--output", "text"]) == 0
        assert "numeric-probes: PASS" in (report_dir / "numeric-probes.txt").read_text()

    def test_latex_report(self, tmp_path):
        assert main(["verify", "--suite", "numeric-probes", "--output", "latex", "--output-dir", str(tmp_path)]) == 0
        assert (tmp_path / "numeric-probes.tex").read_text().startswith("\\begin{tabular}")

    def test_unknown_suite(self, capsys):
        assert main(["verify", "--suite", "bogus"]) == 2
        assert "unknown suite" in capsys.readouterr().err

    def test_size_out_of_range(self, capsys):
        assert main(["verify", "--suite", "restriction", "--n", "5"]) == 2
        assert "out of supported range" in capsys.readouterr().err

    def test_bad_flag_value(self):
        assert main(["verify", "--mode", "fuzzy"]) == 2

    @pytest.mark.slow
    def test_multiplicity_two_point(self, tmp_path):
        argv = [
            "verify", "--suite", "n2-classify", "--n", "2", "--k", "1",
            "--lambda", "0,1,3", "--nu", "5/2,1/2", "--output-dir", str(tmp_path),
        ]
        assert main(argv) == 0
        data = json.loads((tmp_path / "n2-classify.json").read_text())
        dimensions = [c["details"]["dimension"] for c in data["checks"] if "dimension" in c["details"]]
        assert dimensions[0] == 2
