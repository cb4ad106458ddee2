"""Argument validation shared by the symbolic layers and the CLI.

All helpers raise ``ValueError`` so that the CLI can map bad input to the
usage exit code.
"""
import logging
from typing import Sequence

from .constants import SUPPORTED_SIZES

logger = logging.getLogger(__name__)


def validate_size(n: int, *, low: int = None, high: int = None) -> None:
    """Check the rank parameter n of the pair (GL_{n+1}, GL_n).

    Args:
        n: Size parameter
        low: Smallest accepted n (defaults to SUPPORTED_SIZES["min_n"])
        high: Largest accepted n (defaults to SUPPORTED_SIZES["max_n"])

    Raises:
        ValueError: If n is not an integer in range
    """
    low = SUPPORTED_SIZES["min_n"] if low is None else low
    high = SUPPORTED_SIZES["max_n"] if high is None else high
    if not isinstance(n, int) or isinstance(n, bool):
        raise ValueError(f"size n must be an integer, got {n!r}")
    if not low <= n <= high:
        raise ValueError(f"size n={n} out of supported range {low}..{high}")


def validate_index(value: int, low: int, high: int, name: str = "index") -> None:
    """Check that an index lies in low..high inclusive.

    Raises:
        ValueError: "index out of range" when it does not
    """
    if not isinstance(value, int) or isinstance(value, bool) or not low <= value <= high:
        raise ValueError(f"index out of range: {name}={value!r} not in {low}..{high}")


def validate_length(values: Sequence, expected: int, name: str) -> None:
    """Check a parameter vector length.

    Raises:
        ValueError: "size mismatch" when the length is wrong
    """
    if len(values) != expected:
        raise ValueError(
            f"size mismatch: {name} has length {len(values)}, expected {expected}"
        )


def validate_parities(values: Sequence[int], expected: int, name: str) -> None:
    """Check a parity vector: right length, entries in {0, 1}."""
    validate_length(values, expected, name)
    for entry in values:
        if entry not in (0, 1) or isinstance(entry, bool):
            raise ValueError(f"parity vector {name} must have entries in {{0, 1}}, got {entry!r}")


def validate_alpha(alpha: Sequence[int], n: int) -> None:
    """Check a multi-index alpha in N^n."""
    validate_length(alpha, n, "alpha")
    for entry in alpha:
        if not isinstance(entry, int) or isinstance(entry, bool) or entry < 0:
            raise ValueError(f"alpha must be a vector of naturals, got {list(alpha)!r}")
