"""Pytest configuration and fixtures for SBO Workbench tests."""
import os
import random

import pytest

from sbo_workbench.exact_algebra import parameter_field
from sbo_workbench.parameters import InductionParams
from sbo_workbench.schemas import RunConfig


@pytest.fixture
def rng():
    """Seeded generator for tests that draw random algebra elements."""
    return random.Random(7)


@pytest.fixture
def field2():
    return parameter_field(2)


@pytest.fixture
def symbolic2():
    """Fully symbolic parameters at n = 2."""
    return InductionParams.symbolic(2)


@pytest.fixture
def multiplicity_two_config():
    """The k = 1 multiplicity-two point lambda = (0, 1, 3), nu = (5/2, 1/2)."""
    return RunConfig(n=2, k=1, lam=["0", "1", "3"], nu=["5/2", "1/2"], timing=False)


@pytest.fixture
def report_dir(tmp_path, monkeypatch):
    """Point SBO_OUTPUT_DIR at a temporary directory."""
    monkeypatch.setenv("SBO_OUTPUT_DIR", str(tmp_path))
    return tmp_path


# Markers for different test types
def pytest_configure(config):
    """Register custom markers."""
    config.addinivalue_line("markers", "unit: Unit tests of a single module")
    config.addinivalue_line("markers", "integration: Whole suites through run_suite and the CLI")
    config.addinivalue_line("markers", "slow: Tests that take more than 5 seconds")


# Skip slow tests unless asked for
def pytest_collection_modifyitems(config, items):
    """Skip slow tests unless RUN_SLOW_TESTS is set."""
    if not os.getenv("RUN_SLOW_TESTS"):
        skip_slow = pytest.mark.skip(reason="Need RUN_SLOW_TESTS=1 to run slow tests")
        for item in items:
            if "slow" in item.keywords:
                item.add_marker(skip_slow)
