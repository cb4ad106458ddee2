"""Integration tests running whole suites through run_suite."""
import json

import pytest

from sbo_workbench.schemas import RunConfig
from sbo_workbench.verifier import run_suite


@pytest.mark.integration
class TestFastSuites:
    """Suites that finish in a few seconds."""

    def test_restriction_at_n1(self):
        report = run_suite("restriction", RunConfig(n=1, timing=False))
        assert report.passed, [f.details for f in report.failures()]
        # determinant calibration plus three identities for each k
        assert len(report.checks) == 7

    def test_restriction_is_reproducible(self):
        cfg = RunConfig(n=1, timing=False)
        assert run_suite("restriction", cfg).to_json() == run_suite("restriction", cfg).to_json()

    def test_numeric_probes(self):
        report = run_suite("numeric-probes", RunConfig(timing=False))
        assert report.passed, [f.details for f in report.failures()]
        assert len(report.checks) == 3

    def test_gamma_ratio_structure(self):
        report = run_suite("gamma-ratio", RunConfig(timing=False))
        assert len(report.checks) == 10 + 4 + 2
        fixed = [c for c in report.checks if c.check.startswith(("transpose", "c_i", "c-function"))]
        assert len(fixed) == 6
        assert all(check.passed for check in fixed), [c.details for c in fixed if not c.passed]

    def test_residue_scalar_at_n1(self):
        report = run_suite("residue-scalar", RunConfig(n=1, timing=False))
        small = [check for check in report.checks if "n=1" in check.check]
        assert len(small) == 2
        assert all(check.passed for check in small)

    def test_restriction_at_n2(self):
        report = run_suite("restriction", RunConfig(n=2, timing=False))
        assert report.passed, [(f.check, f.details) for f in report.failures()]
        # (n + 1)(n + 2) identities plus the calibration
        assert len(report.checks) == 13

    def test_every_residue_scalar_passes(self):
        report = run_suite("residue-scalar", RunConfig(timing=False))
        assert report.passed, [(f.check, f.details) for f in report.failures()]
        assert len(report.checks) == 2 + 3
        assert len([check for check in report.checks if "n=2" in check.check]) == 3

    def test_report_round_trips_through_json(self):
        report = run_suite("numeric-probes", RunConfig(timing=False))
        data = json.loads(report.to_json())
        assert data["suite"] == "numeric-probes"
        assert len(data["checks"]) == len(report.checks)


@pytest.mark.integration
@pytest.mark.slow
class TestHeavySuites:
    """Full symbolic suites at n = 2."""

    def test_multiplicity_two_point(self, multiplicity_two_config):
        report = run_suite("n2-classify", multiplicity_two_config)
        assert report.passed, [f.details for f in report.failures()]
        classified = [check for check in report.checks if check.anchor.startswith("n=2 kernel dimension")]
        assert classified[0].details["dimension"] == 2

    def test_restriction_at_n3(self):
        report = run_suite("restriction", RunConfig(n=3, timing=False))
        assert report.passed, [(f.check, f.details) for f in report.failures()]
        assert len(report.checks) == 21

    def test_constructive_bases_in_classification(self):
        report = run_suite("n2-classify", RunConfig(timing=False))
        constructive = [check for check in report.checks if check.check.startswith("constructive basis")]
        assert len(constructive) == 6
        assert all(check.passed for check in constructive), [c.details for c in constructive if not c.passed]

    @pytest.mark.parametrize("suite", ["expansion", "bernstein-sato", "algebra-axioms", "n2-classify"])
    def test_suite_passes(self, suite):
        report = run_suite(suite, RunConfig(timing=False))
        assert report.passed, [(f.check, f.details) for f in report.failures()]
