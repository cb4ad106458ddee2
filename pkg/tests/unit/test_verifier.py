"""Unit tests for suite orchestration."""
import pytest

from sbo_workbench import verifier
from sbo_workbench.constants import SUITES
from sbo_workbench.schemas import CheckResult, CheckStatus, RunConfig


def _stub(name, passed=True):
    def runner(cfg):
        result = CheckResult.build(f"{name} check", "restriction", passed)
        return [result.model_copy(update={"millis": 1.5})]

    return runner


@pytest.fixture
def stub_runners(monkeypatch):
    runners = {name: _stub(name) for name in SUITES}
    monkeypatch.setattr(verifier, "SUITE_RUNNERS", runners)
    return runners


@pytest.mark.unit
class TestRunSuite:
    """Dispatch, ordering and timing."""

    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="unknown suite: bogus"):
            verifier.run_suite("bogus", RunConfig())

    def test_single_suite(self, stub_runners):
        report = verifier.run_suite("expansion", RunConfig())
        assert report.suite == "expansion"
        assert [check.check for check in report.checks] == ["expansion check"]
        assert report.millis is not None

    def test_all_runs_in_order(self, stub_runners):
        report = verifier.run_suite("all", RunConfig())
        assert [check.check for check in report.checks] == [f"{name} check" for name in SUITES]
        assert report.passed

    def test_timing_stripped(self, stub_runners):
        report = verifier.run_suite("all", RunConfig(timing=False))
        assert report.millis is None
        assert all(check.millis is None for check in report.checks)

    def test_failure_propagates(self, stub_runners, monkeypatch):
        monkeypatch.setitem(stub_runners, "gamma-ratio", _stub("gamma-ratio", passed=False))
        report = verifier.run_suite("all", RunConfig())
        assert report.status is CheckStatus.FAIL
        assert [check.check for check in report.failures()] == ["gamma-ratio check"]

    def test_same_config_same_report(self, stub_runners):
        cfg = RunConfig(timing=False)
        assert verifier.run_suite("all", cfg).to_json() == verifier.run_suite("all", cfg).to_json()


@pytest.mark.unit
class TestAxiomProperties:
    """The sampled properties behind the algebra-axioms suite."""

    @pytest.mark.parametrize("name", ["polynomial_ring", "weyl_commutator", "pochhammer", "parity"])
    def test_property_holds_on_samples(self, name, rng):
        sample = verifier.AXIOM_PROPERTIES[name]
        assert all(sample(rng) for _ in range(20))

    def test_property_seeding(self):
        first = verifier._property("parity", 5, verifier.AXIOM_PROPERTIES["parity"], 3)
        assert first.passed
        assert first.details == {"samples": 5}
