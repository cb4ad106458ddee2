"""Floating-point probes backing the exact layers.

This is the only module that works with floats. Gamma values and quadratures
come from mpmath at the working precision in NUMERIC_DEFAULTS.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence

import mpmath
from sympy import Rational, sympify

from .constants import CLASSICAL_GAMMA_VALUES, NUMERIC_DEFAULTS
from .exact_algebra import as_rational, eval_at
from .gamma_calculus import GammaExpr

logger = logging.getLogger(__name__)


def _to_mpf(z: Any):
    if isinstance(z, float):
        return mpmath.mpf(z)
    value = as_rational(z)
    return mpmath.mpf(int(value.p)) / int(value.q)


def _is_pole(z: Any) -> bool:
    if isinstance(z, float):
        return z <= 0 and z.is_integer()
    value = as_rational(z)
    return value.is_integer and value <= 0


def gamma_numeric(z: Any) -> float:
    """Gamma(z) for a rational (or float) argument.

    Raises:
        ValueError: "Gamma pole" at nonpositive integers
    """
    if _is_pole(z):
        raise ValueError(f"Gamma pole at z = {z}")
    with mpmath.workdps(NUMERIC_DEFAULTS["mpmath_dps"]):
        return float(mpmath.gamma(_to_mpf(z)))


def evaluate_gamma_expr(expr: GammaExpr, point: Mapping[str, Any]) -> float:
    """Numeric value of a Gamma expression at a rational parameter point."""
    with mpmath.workdps(NUMERIC_DEFAULTS["mpmath_dps"]):
        value = _to_mpf(eval_at(expr.prefactor, point))
        if expr.pi_power:
            value *= mpmath.pi ** _to_mpf(expr.pi_power)
        for argument, exponent in expr.factors:
            half = argument.eval_at(point) / 2
            if _is_pole(half):
                raise ValueError(f"Gamma pole at z = {half}")
            value *= mpmath.gamma(_to_mpf(half)) ** exponent
        return float(value)


def classical_gamma_errors() -> Dict[str, float]:
    """Relative error of :func:`gamma_numeric` on each catalogued classical value."""
    errors = {}
    for argument, closed_form in CLASSICAL_GAMMA_VALUES.items():
        expected = float(sympify(closed_form).evalf(NUMERIC_DEFAULTS["mpmath_dps"]))
        errors[argument] = abs(gamma_numeric(Rational(argument)) - expected) / abs(expected)
    return errors


# Riesz distribution probe
TEST_FUNCTIONS: Dict[str, Callable[[Any], Any]] = {
    "bump": lambda x: (1 - x ** 2) ** 2,  # supported on [-1, 1], value 1 at 0
    "zero": lambda x: 0 * x,
}


@dataclass
class RieszReport:
    test_fn: str
    expected: float
    extrapolated: float
    passed: bool
    converged: bool = True
    samples: Dict[str, float] = field(default_factory=dict)
    reasons: List[str] = field(default_factory=list)

    def to_json(self) -> Dict[str, Any]:
        return {
            "test_fn": self.test_fn,
            "expected": self.expected,
            "extrapolated": self.extrapolated,
            "passed": self.passed,
            "converged": self.converged,
            "reasons": list(self.reasons),
        }


def default_s_grid() -> List[Rational]:
    """s = -1 + 2^-j, j = 1..riesz_grid_size."""
    return [Rational(-1) + Rational(1, 2 ** j) for j in range(1, NUMERIC_DEFAULTS["riesz_grid_size"] + 1)]


def riesz_value(test_fn: str, s: Any) -> float:
    """int |x|^s phi(x) dx / Gamma((s+1)/2) over [-1, 1] for s > -1."""
    value, _ = _riesz_integral(_test_function(test_fn), _to_mpf(s))
    return float(value)


def _test_function(name: str) -> Callable[[Any], Any]:
    if name not in TEST_FUNCTIONS:
        raise ValueError(f"unknown test function: {name}")
    return TEST_FUNCTIONS[name]


def _riesz_integral(phi: Callable[[Any], Any], s):
    """Integral and quadrature error estimate, with the singular part phi(0) |x|^s integrated exactly."""
    h = s + 1
    with mpmath.workdps(NUMERIC_DEFAULTS["mpmath_dps"]):
        even = lambda x: phi(x) + phi(-x)
        at_zero = even(mpmath.mpf(0))
        regular, error = mpmath.quad(lambda x: x ** (h - 1) * (even(x) - at_zero), [0, 1], error=True)
        total = at_zero / h + regular
        return total / mpmath.gamma(h / 2), error


def _extrapolate_to_zero(nodes: Sequence[Any], values: Sequence[Any]):
    """Value at 0 of the interpolating polynomial through (nodes, values) (Neville)."""
    table = list(values)
    for level in range(1, len(nodes)):
        for i in range(len(nodes) - level):
            table[i] = (nodes[i + level] * table[i] - nodes[i] * table[i + 1]) / (nodes[i + level] - nodes[i])
    return table[0]


def riesz_residue_probe(test_fn: str = "bump", s_grid: Optional[Sequence[Any]] = None) -> RieszReport:
    """Extrapolate the normalised Riesz integral to s = -1 and compare with phi(0).

    The test function must be supported in [-1, 1].
    """
    phi = _test_function(test_fn)
    grid = list(s_grid) if s_grid is not None else default_s_grid()
    expected = float(phi(mpmath.mpf(0)))
    tol = NUMERIC_DEFAULTS["quad_error_tol"]
    reasons = []
    with mpmath.workdps(NUMERIC_DEFAULTS["mpmath_dps"]):
        nodes, values, samples = [], [], {}
        for s in grid:
            value, error = _riesz_integral(phi, _to_mpf(s))
            if error > tol * max(1, abs(value)):
                reasons.append(f"quadrature did not converge at s={s}: error estimate {float(error):.3e}")
            nodes.append(_to_mpf(s) + 1)
            values.append(value)
            samples[str(s)] = float(value)
        extrapolated = float(_extrapolate_to_zero(nodes, values))
    converged = not reasons
    passed = converged and abs(extrapolated - expected) <= NUMERIC_DEFAULTS["riesz_tol"]
    logger.info(f"Riesz probe {test_fn}: extrapolated {extrapolated:.10f}, phi(0) = {expected}")
    return RieszReport(test_fn, expected, extrapolated, passed, converged, samples, reasons)
