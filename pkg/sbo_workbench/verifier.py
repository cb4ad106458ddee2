"""Suite orchestration.

:func:`run_suite` maps a suite name and a :class:`RunConfig` to a
:class:`SuiteReport`. Every check is independent; a check that raises is
reported as FAIL and the suite carries on.
"""

import logging
import random
import time
from itertools import product
from typing import Callable, Dict, List

from sympy import Rational

from .constants import AXIOM_SAMPLES, MULTIPLICITY_TWO_INSTANCES, NUMERIC_DEFAULTS, SUITES
from .delta_model import params_for_degrees
from .exact_algebra import AffineForm, parameter_field, parameter_names, pochhammer, random_points
from .gamma_calculus import (
    GammaExpr,
    WeylWord,
    c_function,
    canonicalize,
    equivalent,
    gamma_ratio,
    residue_scalar_check,
    simple_c_function,
    transpose_scalar,
)
from .numeric import classical_gamma_errors, evaluate_gamma_expr, gamma_numeric, riesz_residue_probe
from .operator_identities import (
    GENERIC_LAMBDA,
    classification_sweep,
    random_jet,
    run_check,
    verify_bernstein_sato,
    verify_closed_forms,
    verify_constructive_basis,
    verify_determinant_calibration,
    verify_epsilon_rewrite,
    verify_expansion_cross_check,
    verify_expansion_lemma,
    verify_generic_consistency,
    verify_iterated_bernstein_sato,
    verify_multiplicity_two_basis,
    verify_n2_classification,
    verify_order_independence,
    verify_pde_calibration,
    verify_renormalized_nonvanishing,
    verify_restriction_identities,
)
from .parameters import InductionParams, bracket, is_generic
from .schemas import CheckResult, RunConfig, SuiteReport
from .weyl_algebra import epsilon, random_weyl_element

logger = logging.getLogger(__name__)

EXPANSION_MAX_POWER = 4
CROSS_CHECK_POWERS = ((1, 1), (2, 1), (1, 2))
ITERATED_POWERS = {2: None, 3: (("D", 2), ("D", 3), ("F", 1), ("F", 2))}
GAMMA_RATIO_PATTERNS = 10
RESIDUE_SIZES = (1, 2)
# (k, n1, n2, lambda): n1 <= n2 and the pivot case n1 > n2 with k0 = 0, 1
CONSTRUCTIVE_POINTS = (
    (2, 1, 2, GENERIC_LAMBDA),
    (2, 2, 1, (-1, 0, "-1/5")),
    (2, 2, 1, (-2, 0, "-1/5")),
    (0, 1, 2, GENERIC_LAMBDA),
    (0, 2, 1, ("1/3", 0, 2)),
    (0, 2, 1, ("1/3", 0, 1)),
)


# restriction
def restriction_suite(cfg: RunConfig) -> List[CheckResult]:
    checks = [verify_determinant_calibration()]
    checks += verify_restriction_identities(cfg.n, cfg.k)
    return checks


# bernstein-sato
def bernstein_sato_suite(cfg: RunConfig) -> List[CheckResult]:
    p = cfg.params()
    checks = []
    for kind, i in product(("D", "F"), range(1, cfg.n + 2)):
        checks.append(verify_bernstein_sato(kind, i, p, cfg.mode.value, cfg.samples, cfg.seed))
    symbolic = InductionParams.symbolic(2)
    for alpha, selection in ITERATED_POWERS.items():
        pairs = selection or list(product(("D", "F"), range(1, 4)))
        for kind, i in pairs:
            checks.append(verify_iterated_bernstein_sato(kind, i, alpha, symbolic))
    alpha = tuple(cfg.alpha) if cfg.alpha else (1,) * cfg.n
    for k in range(cfg.n + 1):
        checks.append(verify_order_independence(alpha, k, InductionParams.symbolic(cfg.n)))
    return checks


# expansion
RENORMALIZED_POINTS = (
    (2, 1, (-2, "1/3", 0)),
    (3, 1, (-3, "1/3", 0)),
    (2, 2, GENERIC_LAMBDA),
)


def expansion_suite(cfg: RunConfig) -> List[CheckResult]:
    checks = [
        verify_expansion_lemma(n_pow, m_pow)
        for n_pow, m_pow in product(range(EXPANSION_MAX_POWER + 1), repeat=2)
    ]
    checks += [verify_expansion_cross_check(n_pow, m_pow) for n_pow, m_pow in CROSS_CHECK_POWERS]
    checks += [verify_multiplicity_two_basis(*instance) for instance in MULTIPLICITY_TWO_INSTANCES]
    for n1, n2, lam in RENORMALIZED_POINTS:
        checks.append(verify_renormalized_nonvanishing(params_for_degrees(1, n1, n2, lam)))
    checks += [verify_epsilon_rewrite(k, cfg.n, cfg.seed) for k in range(cfg.n + 1)]
    return checks


# residue-scalar
def residue_scalar_suite(cfg: RunConfig) -> List[CheckResult]:
    checks = []
    for n in RESIDUE_SIZES:
        for k in range(n + 1):
            xi = tuple(cfg.xi) if cfg.xi and n == cfg.n else None

            def body(n=n, k=k, xi=xi):
                report = residue_scalar_check(k, n, xi)
                return report.passed, report.details

            checks.append(run_check(f"residue scalar n={n}, k={k}", "residue_scalar", body))
    return checks


# gamma-ratio
def _random_parities(rng: random.Random, length: int) -> tuple:
    return tuple(rng.randint(0, 1) for _ in range(length))


def gamma_ratio_suite(cfg: RunConfig) -> List[CheckResult]:
    rng = random.Random(cfg.seed)
    checks = []
    for _ in range(GAMMA_RATIO_PATTERNS):
        xi, eta = _random_parities(rng, 3), _random_parities(rng, 2)

        def body(xi=xi, eta=eta):
            ratio = gamma_ratio(InductionParams.symbolic(2, xi=xi, eta=eta))
            return ratio.is_polynomial, {"xi": list(xi), "eta": list(eta), "ratio": str(ratio)}

        checks.append(run_check(f"gamma ratio xi={xi}, eta={eta}", "gamma_ratio", body))
    for xi in product((0, 1), repeat=2):
        def body(xi=xi):
            scalar = transpose_scalar(xi)
            return scalar.is_one(), {"scalar": str(scalar)}

        checks.append(run_check(f"transpose scalar xi={xi}", "transpose_scalar", body))
    checks.append(run_check("c_i is w_i-invariant", "c_function_inverse", _c_function_inverse_body))
    checks.append(run_check("c-function of w_1 w_2", "c_function_product", lambda: _c_function_product_body(cfg)))
    return checks


def _c_function_inverse_body():
    symbolic = InductionParams.symbolic(2)
    K = parameter_field(2)
    failing = []
    for i, xi in product((1, 2), product((0, 1), repeat=3)):
        word = WeylWord((i,), 3)
        swapped = simple_c_function(i, word.act(xi), word.act(symbolic.lam), K)
        if not equivalent(swapped, simple_c_function(i, xi, symbolic.lam, K)):
            failing.append({"i": i, "xi": list(xi)})
    return not failing, {"failing": failing}


def _c_function_product_body(cfg: RunConfig):
    symbolic = InductionParams.symbolic(2)
    K = parameter_field(2)
    xi = (0, 1, 0)
    composite = c_function(WeylWord((1, 2), 3), xi, symbolic.lam, K)
    first = WeylWord((1,), 3)
    factored = simple_c_function(1, xi, symbolic.lam, K) * simple_c_function(2, first.act(xi), first.act(symbolic.lam), K)
    tol = NUMERIC_DEFAULTS["canonicalize_rel_tol"]
    compared = 0
    for point in random_points(parameter_names(2), 10, cfg.seed):
        try:
            a, b = evaluate_gamma_expr(composite, point), evaluate_gamma_expr(factored, point)
        except ValueError:
            continue
        compared += 1
        if abs(a - b) > tol * max(abs(a), abs(b)):
            return False, {"point": {k: str(v) for k, v in point.items()}, "values": [a, b]}
    return compared > 0, {"points": compared}


# n2-classify
def n2_classify_suite(cfg: RunConfig) -> List[CheckResult]:
    checks = [verify_pde_calibration()]
    sweep = cfg.is_symbolic or cfg.n != 2
    if not sweep:
        p = cfg.params()
        ks = [cfg.k] if cfg.k is not None else [0, 1, 2]
        points = [("configured", k, p) for k in ks]
    else:
        points = classification_sweep()
    for label, k, p in points:
        checks.append(verify_n2_classification(p, k, label))
        checks.append(verify_closed_forms(p, k, label))
        if is_generic(p):
            checks.append(verify_generic_consistency(p, k))
    if sweep:
        for k, n1, n2, lam in CONSTRUCTIVE_POINTS:
            label = f"({n1},{n2}) lambda={tuple(str(v) for v in lam)}"
            checks.append(verify_constructive_basis(params_for_degrees(k, n1, n2, lam), k, label))
    return checks


# algebra-axioms
def _property(name: str, count: int, sample: Callable[[random.Random], bool], seed: int) -> CheckResult:
    def body():
        rng = random.Random(f"{seed}:{name}")
        for index in range(count):
            if not sample(rng):
                return False, {"samples": count, "first_failure": index}
        return True, {"samples": count}

    return run_check(f"axiom {name}", "algebra_axioms", body)


def _ring_sample(rng: random.Random) -> bool:
    f, g, h = (random_jet(rng, 1, terms=3, degree=2) for _ in range(3))
    return f * g == g * f and (f + g) * h == f * h + g * h and (f * g) * h == f * (g * h)


def _weyl_associativity_sample(rng: random.Random) -> bool:
    a, b, c = (random_weyl_element(rng, 1) for _ in range(3))
    return (a * b) * c == a * (b * c)


def _weyl_commutator_sample(rng: random.Random) -> bool:
    n = 2
    i, j, k, l = (rng.randint(1, n + 1) for _ in range(4))
    lhs = epsilon(i, j, n).commutator(epsilon(k, l, n))
    rhs = epsilon(i, j, n).zero_like()
    if j == k:
        rhs = rhs + epsilon(i, l, n)
    if l == i:
        rhs = rhs - epsilon(k, j, n)
    return lhs == rhs


def _module_action_sample(rng: random.Random) -> bool:
    a, b = random_weyl_element(rng, 1), random_weyl_element(rng, 1)
    f = random_jet(rng, 1)
    return (a * b).apply(f) == a.apply(b.apply(f))


def _random_rational(rng: random.Random) -> Rational:
    return Rational(rng.randint(-20, 20), rng.randint(1, 9))


def _pochhammer_sample(rng: random.Random) -> bool:
    a, j = _random_rational(rng), rng.randint(0, 6)
    return pochhammer(a, j + 1) == pochhammer(a, j) * (a + j)


def _random_gamma_expr(rng: random.Random) -> GammaExpr:
    K = parameter_field(1)
    lam1, nu1 = AffineForm.symbol("lambda1"), AffineForm.symbol("nu1")
    factors = []
    for _ in range(rng.randint(1, 4)):
        argument = lam1 * rng.choice([1, -1]) + nu1 * rng.choice([0, 1]) + Rational(rng.randint(-6, 6), rng.choice([1, 2]))
        factors.append((argument, rng.choice([1, -1])))
    return GammaExpr.build(K, rng.randint(1, 5), factors)


def _canonicalize_sample(rng: random.Random) -> bool:
    e = _random_gamma_expr(rng)
    canonical = canonicalize(e)
    if canonicalize(canonical) != canonical:
        return False
    point = random_points(parameter_names(1), 1, rng.randint(0, 2 ** 32))[0]
    try:
        a, b = evaluate_gamma_expr(e, point), evaluate_gamma_expr(canonical, point)
    except ValueError:
        return True
    return abs(a - b) <= NUMERIC_DEFAULTS["canonicalize_rel_tol"] * max(abs(a), abs(b))


def _parity_sample(rng: random.Random) -> bool:
    a, b = rng.randint(-50, 50), rng.randint(-50, 50)
    return bracket(a + b) == (bracket(a) + bracket(b)) % 2


AXIOM_PROPERTIES: Dict[str, Callable[[random.Random], bool]] = {
    "polynomial_ring": _ring_sample,
    "weyl_associativity": _weyl_associativity_sample,
    "weyl_commutator": _weyl_commutator_sample,
    "module_action": _module_action_sample,
    "pochhammer": _pochhammer_sample,
    "canonicalize": _canonicalize_sample,
    "parity": _parity_sample,
}


def algebra_axioms_suite(cfg: RunConfig) -> List[CheckResult]:
    return [_property(name, AXIOM_SAMPLES[name], sample, cfg.seed) for name, sample in AXIOM_PROPERTIES.items()]


# numeric-probes
def numeric_probes_suite(cfg: RunConfig) -> List[CheckResult]:
    def gamma_body():
        errors = classical_gamma_errors()
        worst = max(errors, key=errors.get)
        try:
            gamma_numeric(0)
            pole_raised = False
        except ValueError:
            pole_raised = True
        passed = errors[worst] <= NUMERIC_DEFAULTS["gamma_rel_tol"] and pole_raised
        return passed, {"values": len(errors), "worst_argument": worst, "worst_error": errors[worst], "pole_raised": pole_raised}

    checks = [run_check("gamma_numeric classical values", "gamma_numeric", gamma_body)]
    for test_fn in ("bump", "zero"):
        def body(test_fn=test_fn):
            report = riesz_residue_probe(test_fn)
            return report.passed, report.to_json()

        checks.append(run_check(f"Riesz residue probe {test_fn}", "riesz_probe", body))
    return checks


SUITE_RUNNERS: Dict[str, Callable[[RunConfig], List[CheckResult]]] = {
    "restriction": restriction_suite,
    "bernstein-sato": bernstein_sato_suite,
    "expansion": expansion_suite,
    "residue-scalar": residue_scalar_suite,
    "gamma-ratio": gamma_ratio_suite,
    "n2-classify": n2_classify_suite,
    "algebra-axioms": algebra_axioms_suite,
    "numeric-probes": numeric_probes_suite,
}


def run_suite(name: str, cfg: RunConfig) -> SuiteReport:
    """Run one suite, or every suite in order for ``all``.

    Raises:
        ValueError: "unknown suite" for names outside SUITES and ``all``
    """
    if name != "all" and name not in SUITE_RUNNERS:
        raise ValueError(f"unknown suite: {name}")
    started = time.perf_counter()
    checks: List[CheckResult] = []
    for suite in (SUITES if name == "all" else (name,)):
        logger.info(f"Running suite {suite}")
        checks.extend(SUITE_RUNNERS[suite](cfg))
    millis = round((time.perf_counter() - started) * 1000, 3)
    if not cfg.timing:
        checks = [check.model_copy(update={"millis": None}) for check in checks]
        millis = None
    report = SuiteReport(suite=name, checks=checks, millis=millis)
    logger.info(f"Suite {name}: {report.status.value} ({len(report.failures())} of {len(checks)} failed)")
    return report
