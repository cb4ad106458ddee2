"""Unit tests for the run configuration and report schemas."""
import json

import pytest
from pydantic import ValidationError

from sbo_workbench.constants import CHECK_ANCHORS
from sbo_workbench.parameters import InductionParams
from sbo_workbench.schemas import (
    CheckResult,
    CheckStatus,
    InductionParamsModel,
    Mode,
    RunConfig,
    SuiteReport,
    known_suites,
)


@pytest.mark.unit
class TestRunConfig:
    """Validation of everything a run depends on."""

    def test_defaults(self):
        cfg = RunConfig()
        assert cfg.n == 2
        assert cfg.is_symbolic
        assert cfg.mode is Mode.SYMBOLIC
        assert cfg.seed == 7

    def test_size_out_of_range(self):
        with pytest.raises(ValidationError, match="out of supported range"):
            RunConfig(n=4)

    def test_k_out_of_range(self):
        with pytest.raises(ValidationError, match="index out of range"):
            RunConfig(n=2, k=3)

    def test_lambda_without_nu(self):
        with pytest.raises(ValidationError, match="lambda and nu must be given together"):
            RunConfig(n=1, lam=["0", "1"])

    def test_length_mismatch(self):
        with pytest.raises(ValidationError, match="size mismatch"):
            RunConfig(n=2, lam=["0", "1"], nu=["0", "0"])

    def test_float_rejected(self):
        with pytest.raises(ValidationError):
            RunConfig(n=1, lam=[0.5, 1], nu=["0"])

    def test_parity_entries(self):
        with pytest.raises(ValidationError, match="parity vector"):
            RunConfig(n=1, xi=[0, 2])

    def test_negative_alpha(self):
        with pytest.raises(ValidationError, match="naturals"):
            RunConfig(n=2, alpha=[1, -1])

    def test_samples_and_seed(self):
        with pytest.raises(ValidationError, match="samples must be positive"):
            RunConfig(samples=0)
        with pytest.raises(ValidationError, match="64-bit"):
            RunConfig(seed=-1)

    def test_numeric_params(self, multiplicity_two_config):
        p = multiplicity_two_config.params()
        assert p.is_numeric
        assert p.to_json()["lambda"] == ["0", "1", "3"]

    def test_symbolic_params(self):
        p = RunConfig(n=1, xi=[1, 0]).params()
        assert not p.is_numeric
        assert p.xi == (1, 0)


@pytest.mark.unit
class TestReports:
    """CheckResult and SuiteReport."""

    def test_anchor_lookup(self):
        result = CheckResult.build("determinant_calibration n=2", "determinant_calibration", True)
        assert result.anchor == CHECK_ANCHORS["determinant_calibration"]
        assert result.status is CheckStatus.PASS

    def test_empty_suite_passes(self):
        assert SuiteReport(suite="restriction").passed

    def test_one_failure_fails_the_suite(self):
        checks = [
            CheckResult.build("a", "restriction", True),
            CheckResult.build("b", "restriction", False, {"error": "boom"}),
        ]
        report = SuiteReport(suite="restriction", checks=checks)
        assert report.status is CheckStatus.FAIL
        assert [check.check for check in report.failures()] == ["b"]

    def test_json(self):
        report = SuiteReport(suite="gamma-ratio", checks=[CheckResult.build("a", "gamma_ratio", True)])
        data = json.loads(report.to_json())
        assert data["status"] == "PASS"
        assert data["checks"][0]["status"] == "PASS"
        assert data["millis"] is None

    def test_known_suites(self):
        suites = known_suites()
        assert suites[0] == "restriction"
        assert suites[-1] == "all"


@pytest.mark.unit
class TestInductionParamsModel:
    """Serialized parameters."""

    def test_round_trip(self):
        p = InductionParams.build(["1/2", "0", "-3"], ["5/2", "1"], xi=(1, 0, 0), eta=(0, 1))
        model = InductionParamsModel.from_params(p)
        assert model.lam == ["1/2", "0", "-3"]
        assert model.to_params().to_json() == p.to_json()

    def test_alias(self):
        model = InductionParamsModel.model_validate({"n": 1, "xi": [0, 0], "lambda": ["0", "1"], "eta": [0], "nu": ["0"]})
        assert model.to_params().n == 1
