"""Smoke tests for the public import surface of sbo_workbench."""

import importlib


def test_top_level_imports_available():
    module = importlib.import_module("sbo_workbench")

    # Construction layer used by the construct command
    assert hasattr(module, "build_D"), "build_D should be exported for operator construction"
    assert hasattr(module, "build_L"), "build_L should be exported for operator construction"

    # Verification entry points
    assert hasattr(module, "run_suite")
    assert hasattr(module, "RunConfig")
    assert hasattr(module, "SuiteReport")


def test_all_names_resolve():
    module = importlib.import_module("sbo_workbench")
    missing = [name for name in module.__all__ if not hasattr(module, name)]
    assert not missing, f"__all__ lists unknown names: {missing}"


def test_console_entry_point_importable():
    cli = importlib.import_module("sbo_workbench.cli")
    assert callable(cli.main)
