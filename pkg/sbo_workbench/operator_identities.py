"""Identities that tie the symbolic layers together.

Each ``verify_*`` function returns :class:`~sbo_workbench.schemas.CheckResult`
objects and never raises: an exception inside a check becomes a FAIL entry
whose details carry the message.
"""
import logging
import random
import time
from dataclasses import replace
from functools import lru_cache
from itertools import product
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from sympy import Matrix, Rational

from .constants import MULTIPLICITY_TWO_INSTANCES
from .covariant_functions import (
    FunctionCombination,
    apply_weyl,
    catalogue,
    entry_ring,
    h_determinant,
    h_entry,
    h_ring,
    kernel_K,
    kernel_exponents,
    restrict_k,
    restrict_operator,
    x_k_images,
)
from .delta_model import (
    PdeOperator,
    case_data,
    closed_form_basis,
    degrees,
    derive_system,
    params_for_degrees,
    predicted_dimension,
    recurrence_holds,
    same_span,
    solve_kernels,
)
from .epsilon_algebra import NormalFormExpansion, expand_rest1_FD, expansion_prefactor
from .exact_algebra import (
    as_rational,
    eval_at,
    is_constant,
    lambda_forms,
    nu_forms,
    parameter_field,
    parameter_names,
    pochhammer,
    random_points,
    to_field,
)
from .gamma_calculus import bs_target, equivalent, expected_bs_factor, functional_equation_scalar
from .parameters import InductionParams, classify_generic, is_generic, multiplicity_two_params
from .schemas import CheckResult
from .validators import validate_index, validate_size
from .weyl_algebra import WeylEntries, build_D, build_F, build_L, epsilon, shift_lambda

logger = logging.getLogger(__name__)

Details = Dict[str, Any]


def run_check(check: str, anchor_key: str, body: Callable[[], Tuple[bool, Details]]) -> CheckResult:
    """Run one check body and wrap its outcome, turning exceptions into FAIL."""
    started = time.perf_counter()
    try:
        passed, details = body()
    except Exception as e:
        logger.warning(f"{check} raised {type(e).__name__}: {e}")
        passed, details = False, {"error": f"{type(e).__name__}: {e}"}
    if passed:
        logger.info(f"{check} ✓")
    else:
        logger.info(f"{check} failed: {details}")
    result = CheckResult.build(check, anchor_key, passed, details)
    return result.model_copy(update={"millis": round((time.perf_counter() - started) * 1000, 3)})


def _lam_ij(lam: Sequence[Any], i: int, j: int, K) -> Any:
    """lambda_{i,j} = lambda_i - lambda_j - 1."""
    return to_field(K, lam[i - 1] - lam[j - 1] - 1)


# Determinant formulas
def verify_determinant_calibration() -> CheckResult:
    """D_3 and F_1 at n = 2 against their expanded three-term formulas."""
    def body():
        n = 2
        K = parameter_field(n)
        lam = lambda_forms(n)
        entries = WeylEntries(n)
        X, Y, Z = entries.epsilon(2, 1), entries.epsilon(3, 2), entries.epsilon(3, 1)
        l31, l32, l21 = _lam_ij(lam, 3, 1, K), _lam_ij(lam, 3, 2, K), _lam_ij(lam, 2, 1, K)
        expected_d = (
            entries.phi(1) * (X * Y - Z.scale(l32))
            - (entries.phi(2) * Y).scale(l31)
            + entries.phi(3).scale(l31 * l32)
        )
        expected_f = (
            entries.psi(3) * (Y * X + Z.scale(l21))
            - (entries.psi(2) * X).scale(l31)
            + entries.psi(1).scale(l31 * l21)
        )
        d_ok = build_D(3, lam, n, entries) == expected_d
        f_ok = build_F(1, lam, n, entries) == expected_f
        return d_ok and f_ok, {"D_3": d_ok, "F_1": f_ok}

    return run_check("determinant_calibration n=2", "determinant_calibration", body)


# Restriction identities
def restriction_identities(n: int, k: int) -> List[Tuple[str, str, int, Optional[Any]]]:
    """(name, kind, i, expected) for every D_i and F_i against rest_k.

    ``expected`` is the h-polynomial c * det_H^p that rest_k o W must equal on
    the zero derivative, or None when rest_k o W vanishes.
    """
    validate_size(n)
    validate_index(k, 0, n, "k")
    K = parameter_field(n)
    lam = lambda_forms(n)
    R = h_ring(n)
    identities = []
    for i in range(1, n + 2):
        if i <= k:
            expected = None
        elif i == k + 1:
            c = K.one
            for j in range(1, k + 1):
                c *= _lam_ij(lam, k + 1, j, K)
            expected = R.one.mul_ground(c)
        else:
            continue
        identities.append((f"rest_{k} o D_{i}", "D", i, expected))
    for j in range(1, n + 2):
        if j == k + 1:
            c = K.one
            for m in range(k + 2, n + 2):
                c *= _lam_ij(lam, m, k + 1, K)
            expected = h_determinant(n).mul_ground(c)
        elif j >= k + 2:
            expected = None
        else:
            continue
        identities.append((f"rest_{k} o F_{j}", "F", j, expected))
    return identities


def verify_restriction_identities(n: int, k: Optional[int] = None) -> List[CheckResult]:
    """Vanishing and scalar relations of rest_k against D_i, F_i, for one k or all of 0..n.

    A scalar relation passes up to an overall sign, which is recorded.
    """
    ks = range(n + 1) if k is None else [k]
    lam = lambda_forms(n)
    entries = WeylEntries(n)
    zero_dexp = (0,) * ((n + 1) ** 2)
    results = []
    for kk in ks:
        for name, kind, i, expected in restriction_identities(n, kk):
            def body(kind=kind, i=i, expected=expected, kk=kk):
                W = build_D(i, lam, n, entries) if kind == "D" else build_F(i, lam, n, entries)
                restricted = restrict_operator(W, kk)
                if expected is None:
                    return not restricted, {"surviving_derivatives": len(restricted)}
                if set(restricted) != {zero_dexp}:
                    return False, {"surviving_derivatives": len(restricted)}
                value = restricted[zero_dexp]
                if value == expected:
                    return True, {"sign": 1}
                if value == -expected:
                    return True, {"sign": -1}
                return False, {"restricted": str(value.as_expr()), "expected": str(expected.as_expr())}

            results.append(run_check(f"{name} (n={n})", "restriction", body))
    return results


# Expansion of rest_1 F_1^n D_3^m
def verify_expansion_lemma(n_pow: int, m_pow: int) -> CheckResult:
    """Shape, first and last coefficient of the normal form of rest_1 F_1^n D_3^m."""
    def body():
        K = parameter_field(2)
        lam = lambda_forms(2)
        expansion = expand_rest1_FD(n_pow, m_pow)
        pre = expansion_prefactor(n_pow, m_pow)
        details: Details = {"terms": len(expansion.terms)}
        shape_ok = expansion.det_power == n_pow and all(
            a == n_pow - c and b == m_pow - c for a, b, c in expansion.words()
        )
        details["shape"] = shape_ok
        first = pre * pochhammer(lam[0] - lam[2] + n_pow + 1, m_pow, K)
        first_ok = expansion.coefficient(n_pow, m_pow, 0) == first
        details["a_0"] = first_ok
        last_ok = True
        if m_pow <= n_pow:
            last = pre * pochhammer(to_field(K, n_pow - m_pow + 1), m_pow) * pochhammer(lam[1] - lam[2] + 1, m_pow, K)
            last_ok = expansion.coefficient(n_pow - m_pow, 0, m_pow) == last
            details["a_m"] = last_ok
        return shape_ok and first_ok and last_ok, details

    return run_check(f"expansion n={n_pow}, m={m_pow}", "expansion", body)


def _word_operator(a: int, b: int, c: int):
    n = 2
    X, Y, Z = epsilon(2, 1, n), epsilon(3, 2, n), epsilon(3, 1, n)
    return (X ** a) * (Y ** b) * (Z ** c)


def verify_expansion_cross_check(n_pow: int, m_pow: int) -> CheckResult:
    """The epsilon-word normal form against rest_1 of the matrix-entry operator F_1^n D_3^m."""
    def body():
        n = 2
        direct = restrict_operator(build_L((n_pow, m_pow), 1, lambda_forms(n), n), 1)
        expansion = expand_rest1_FD(n_pow, m_pow)
        det_power = h_determinant(n) ** expansion.det_power
        rebuilt: Dict[Tuple[int, ...], Any] = {}
        for word, coeff in expansion.terms.items():
            for dexp, poly in restrict_operator(_word_operator(*word), 1).items():
                rebuilt[dexp] = rebuilt.get(dexp, h_ring(n).zero) + (poly * det_power).mul_ground(coeff)
        rebuilt = {dexp: poly for dexp, poly in rebuilt.items() if poly}
        return rebuilt == direct, {"derivatives": len(direct)}

    return run_check(f"expansion cross-check n={n_pow}, m={m_pow}", "expansion_cross_check", body)


# Bernstein-Sato identities on the formal kernel
def _kernel_shift(p: InductionParams, target: InductionParams) -> List[int]:
    """Integer exponent shift between the kernels of p and target."""
    shifts = []
    for before, after in zip(kernel_exponents(p), kernel_exponents(target)):
        diff = after.difference(before)
        if diff is None or not diff.is_integer:
            raise RuntimeError(f"non-integral shift between kernel exponents {before} and {after}")
        shifts.append(int(diff))
    return shifts


def _extract_factor(result: FunctionCombination, delta: Sequence[int]) -> Any:
    """b with result = b * prod base^delta * K.

    Raises:
        RuntimeError: "non-monomial output" when no such constant b exists
    """
    result = result.normalize()
    if not result:
        return parameter_field(result.n).zero
    bases = [base for _, base in catalogue(result.n)]
    floors = [min(min(off[m] for off in result.summands), delta[m]) for m in range(len(bases))]
    R = entry_ring(result.n)
    lhs = R.zero
    for off, poly in result.summands.items():
        term = poly
        for base, o, c in zip(bases, off, floors):
            term = term * base ** (o - c)
        lhs += term
    monomial = R.one
    for base, d, c in zip(bases, delta, floors):
        monomial = monomial * base ** (d - c)
    b = lhs.LC / monomial.LC
    if lhs != monomial.mul_ground(b):
        raise RuntimeError("non-monomial output: the result is not a multiple of one shifted kernel")
    return b


@lru_cache(maxsize=64)
def _source_factor(kind: str, i: int, lam: Tuple[Any, ...], n: int):
    entries = WeylEntries(n)
    return build_D(i, list(lam), n, entries) if kind == "D" else build_F(i, list(lam), n, entries)


def apply_source_operator(kind: str, i: int, alpha: int, p: InductionParams) -> FunctionCombination:
    """D_i^alpha(-lambda) or F_i^alpha(-lambda) applied to the formal kernel of p.

    The combination is collapsed to a single summand after every factor, so an
    intermediate multiple of a shifted kernel stays one monomial.
    """
    n = p.n
    current = tuple(-v for v in p.lam)
    f = kernel_K(p).as_combination()
    for _ in range(alpha):
        f = apply_weyl(_source_factor(kind, i, current, n), f).collapse()
        current = tuple(shift_lambda(kind, i, current))
    return f


def bernstein_sato_factor(kind: str, i: int, p: InductionParams, alpha: int = 1) -> Any:
    """The polynomial b with X(-lambda)^alpha K(p) = b K(target)."""
    if kind not in ("D", "F"):
        raise ValueError(f"unknown operator kind: {kind}")
    validate_index(i, 1, p.n + 1, "i")
    result = apply_source_operator(kind, i, alpha, p)
    b = _extract_factor(result, _kernel_shift(p, bs_target(kind, i, p, alpha)))
    logger.debug(f"{kind}_{i}^{alpha} factor: {b.as_expr()}")
    return b


def _zero_parities(p: InductionParams) -> InductionParams:
    return replace(p, xi=(0,) * (p.n + 1), eta=(0,) * p.n)


def _bs_body(kind: str, i: int, alpha: int, p: InductionParams, mode: str, samples: int, seed: int):
    def body():
        b = bernstein_sato_factor(kind, i, p, alpha)
        expected = expected_bs_factor(kind, i, _zero_parities(p), alpha)
        details: Details = {"b": str(b.as_expr()), "expected": str(expected)}
        if not b or not expected.is_gamma_free or expected.pi_power != 0:
            return False, details
        ratio = b / expected.prefactor
        proportional = is_constant(ratio) and bool(ratio)
        details["ratio"] = str(ratio.as_expr())
        if not proportional or mode != "numeric":
            return proportional, details
        mismatches = []
        for point in random_points(parameter_names(p.n), samples, seed, avoid=[b]):
            value = as_rational(bernstein_sato_factor(kind, i, p.substitute(point), alpha))
            if value != eval_at(b, point):
                mismatches.append({k: str(v) for k, v in point.items()})
        details["samples"] = samples
        if mismatches:
            details["mismatch"] = mismatches[0]
        return not mismatches, details

    return body


def verify_bernstein_sato(
    kind: str,
    i: int,
    p: Optional[InductionParams] = None,
    mode: str = "symbolic",
    samples: int = 20,
    seed: int = 7,
) -> CheckResult:
    """X_i(-lambda) K = b K' with b proportional to the parity-zero p_i / q_i factor.

    In numeric mode b is also recomputed at seeded rational points and compared
    with its symbolic value there.
    """
    p = p if p is not None else InductionParams.symbolic(2)
    return run_check(
        f"{kind}_{i}(-lambda) K (n={p.n}, {mode})",
        "bernstein_sato",
        _bs_body(kind, i, 1, p, mode, samples, seed),
    )


def verify_iterated_bernstein_sato(kind: str, i: int, alpha: int, p: Optional[InductionParams] = None) -> CheckResult:
    p = p if p is not None else InductionParams.symbolic(2)
    return run_check(
        f"{kind}_{i}^{alpha}(-lambda) K (n={p.n})",
        "iterated_bernstein_sato",
        _bs_body(kind, i, alpha, p, "symbolic", 0, 0),
    )


def verify_order_independence(alpha: Sequence[int], k: int, p: Optional[InductionParams] = None) -> CheckResult:
    """The functional-equation scalar of L_{alpha,k} does not depend on the composition order."""
    p = p if p is not None else InductionParams.symbolic(len(alpha))

    def body():
        first = functional_equation_scalar(alpha, k, p, "F-first")
        second = functional_equation_scalar(alpha, k, p, "D-first")
        return equivalent(first, second), {"F_first": str(first), "D_first": str(second)}

    return run_check(f"order independence alpha={tuple(alpha)}, k={k}", "order_independence", body)


# Multiplicity two
def multiplicity_two_expansions(
    lambda0: Any, n1: int, n2: int, k0: int, l0: int
) -> Tuple[InductionParams, NormalFormExpansion, NormalFormExpansion]:
    """The two operators at the multiplicity-two locus as numeric normal forms.

    The first is the renormalised rest_1 F_1^{n1} D_3^{k0} at the parameter with
    lambda_2 and lambda_3 exchanged, followed by (eps^{3,2})^{n2-k0}; the second
    is rest_1 F_1^{n1-l0-1} D_3^{n2-l0-1} composed with (eps^{3,1})^{l0+1}.
    """
    p = multiplicity_two_params(lambda0, n1, n2, k0, l0)
    lam = p.lam_values()
    renormalised = expand_rest1_FD(n1, k0).scale(1 / expansion_prefactor(n1, k0))
    swapped = {"lambda1": lam[0], "lambda2": lam[2], "lambda3": lam[1]}
    first = renormalised.substitute(swapped).shift_words(db=n2 - k0)
    base = expand_rest1_FD(n1 - l0 - 1, n2 - l0 - 1, lam=p.lam)
    second = NormalFormExpansion({w: as_rational(c) for w, c in base.terms.items()}, base.det_power)
    return p, first, second.shift_words(dc=l0 + 1)


def verify_multiplicity_two_basis(lambda0: Any, n1: int, n2: int, k0: int, l0: int) -> CheckResult:
    """Two nonzero, independent operators and a two-dimensional kernel space."""
    def body():
        p, first, second = multiplicity_two_expansions(lambda0, n1, n2, k0, l0)
        top = pochhammer(n1 - k0 + 1, k0) * pochhammer(n2 - k0 + 1, k0)
        top_ok = first.coefficient(n1 - k0, n2 - k0, k0) == top
        surviving = pochhammer(-n1, n1 - l0 - 1) * pochhammer(-n2, n2 - l0 - 1)
        surviving_ok = second.coefficient(n1 - l0 - 1, n2 - l0 - 1, l0 + 1) == surviving
        keys = sorted({(e.det_power, w) for e in (first, second) for w in e.terms})
        rows = [
            [e.coefficient(*w) if e.det_power == d else 0 for d, w in keys]
            for e in (first, second)
        ]
        rank = Matrix(rows).rank() if keys else 0
        dimension = solve_kernels(p, 1).dimension
        details = {
            "params": p.to_json(),
            "top_coefficient": top_ok,
            "surviving_coefficient": surviving_ok,
            "rank": rank,
            "kernel_dimension": dimension,
        }
        passed = not first.is_zero() and not second.is_zero() and top_ok and surviving_ok and rank == 2 and dimension == 2
        return passed, details

    return run_check(f"multiplicity two {(lambda0, n1, n2, k0, l0)}", "multiplicity_two", body)


def verify_renormalized_nonvanishing(p: InductionParams) -> CheckResult:
    """(lambda1-lambda3+1+n2)_{n1}^{-1} rest_1 F_1^{n1} D_3^{n2} is nonzero at p."""
    def body():
        n1, n2 = degrees(p, 1)
        if not (n1.is_integer and n2.is_integer and n1 >= 0 and n2 >= 0):
            return False, {"error": f"degrees ({n1}, {n2}) are not natural"}
        n1, n2 = int(n1), int(n2)
        expansion = expand_rest1_FD(n1, n2).scale(1 / expansion_prefactor(n1, n2)).substitute(p.assignment())
        return not expansion.is_zero(), {"params": p.to_json(), "terms": len(expansion.terms)}

    return run_check("renormalized operator nonzero", "renormalized", body)


# epsilon_H o rest_k = rest_k o epsilon
def _epsilon_h(a: int, b: int, poly, n: int):
    """sum_m h_{ma} d/dh_{mb} applied to an h-polynomial."""
    result = h_ring(n).zero
    for m in range(1, n + 1):
        derived = poly.diff((m - 1) * n + (b - 1))
        if derived:
            result += h_entry(n, m, a) * derived
    return result


def random_jet(rng: random.Random, n: int, terms: int = 4, degree: int = 3):
    """Random polynomial in the g-entries with small integer coefficients."""
    R = entry_ring(n)
    coefficients: Dict[Tuple[int, ...], int] = {}
    for _ in range(terms):
        monom = [0] * R.ngens
        for _ in range(rng.randint(1, degree)):
            monom[rng.randrange(R.ngens)] += 1
        coefficients[tuple(monom)] = coefficients.get(tuple(monom), 0) + rng.choice([-3, -2, -1, 1, 2, 3])
    return R.from_dict({m: c for m, c in coefficients.items() if c})


def verify_epsilon_rewrite(k: int, n: int = 2, seed: int = 7, samples: int = 5) -> CheckResult:
    """eps_H^{a,b}(rest_k f) = rest_k(eps^{s(a),s(b)} f) on random jets, s = x_k^{-1} on indices."""
    def body():
        validate_index(k, 0, n, "k")
        images = x_k_images(k, n)
        rng = random.Random(seed)
        for _ in range(samples):
            f = random_jet(rng, n)
            restricted = restrict_k(f, k, n)
            for a, b in product(range(1, n + 1), repeat=2):
                lhs = _epsilon_h(a, b, restricted, n)
                rhs = restrict_k(epsilon(images.index(a) + 1, images.index(b) + 1, n).apply(f), k, n)
                if lhs != rhs:
                    return False, {"pair": [a, b], "jet": str(f.as_expr())}
        return True, {"samples": samples}

    return run_check(f"epsilon rewrite k={k}, n={n}", "epsilon_rewrite", body)


# Equivariance equations at n = 2
def expected_k1_system() -> Dict[str, PdeOperator]:
    """The three equations for K_1 at n = 2, written out by hand."""
    K = parameter_field(2)
    lam = [v.to_element(K) for v in lambda_forms(2)]
    nu = [v.to_element(K) for v in nu_forms(2)]
    x, y, z = (PdeOperator.coordinate(name) for name in "xyz")
    dx, dy, dz = (PdeOperator.partial(name) for name in "xyz")
    three_halves = to_field(K, Rational(3, 2))
    gamma1 = (x * dx + z * dz).with_rhs(lam[0] - nu[0] - three_halves)
    delta1 = (y * dy + z * dz).with_rhs(nu[1] - lam[2] - three_halves)
    euler_sum = PdeOperator.scalar(lam[0] - lam[2] - 2) - x * dx - z * dz - y * dy
    e12 = z * euler_sum - x * y * (PdeOperator.scalar(lam[1] - lam[2] - 1) - y * dy)
    return {"gamma1": gamma1, "delta1": delta1, "E12": e12.with_rhs(0)}


def _agree_up_to_scale(derived: PdeOperator, expected: PdeOperator) -> bool:
    if not expected.terms:
        return not derived.terms and derived.rhs == expected.rhs
    key, coeff = expected.sorted_terms()[0]
    base = derived.terms.get(key)
    if not base:
        return False
    ratio = coeff / base
    if not is_constant(ratio):
        return False
    return derived.scale(ratio).terms == expected.terms and derived.rhs * ratio == expected.rhs


def verify_pde_calibration() -> CheckResult:
    def body():
        derived = derive_system(1, 2)
        details = {}
        for tag, expected in expected_k1_system().items():
            details[tag] = tag in derived and _agree_up_to_scale(derived[tag], expected)
        return all(details.values()), details

    return run_check("equivariance equations k=1, n=2", "pde_calibration", body)


# n = 2 classification sweep
GENERIC_LAMBDA = ("1/3", "2/7", "-1/5")

ClassificationPoint = Tuple[str, int, InductionParams]


def classification_sweep() -> List[ClassificationPoint]:
    """Labelled parameter points covering every case of the n = 2 classification."""
    points: List[ClassificationPoint] = []
    for n1, n2 in product(range(4), range(3)):
        points.append((f"k=1 generic ({n1},{n2})", 1, params_for_degrees(1, n1, n2, GENERIC_LAMBDA)))
    for n1, n2, l0 in [(1, 1, 0), (2, 1, 0), (2, 2, 0), (2, 2, 1), (3, 2, 1), (2, 3, 1)]:
        lam = (l0 - n1 - n2, "1/3", 0)
        points.append((f"k=1 upper ({n1},{n2}) l0={l0}", 1, params_for_degrees(1, n1, n2, lam)))
    instances = list(MULTIPLICITY_TWO_INSTANCES) + [(0, 2, 3, 0, 1), ("1/2", 3, 3, 1, 2)]
    for instance in instances:
        points.append((f"k=1 multiplicity two {instance}", 1, multiplicity_two_params(*instance)))
    for n1, n2, l0, k0 in [(3, 3, 0, 1), (3, 3, 1, 2)]:
        lam = (l0 - n1 - n2, k0 - n2, 0)
        points.append((f"k=1 k0>l0 ({n1},{n2}) l0={l0} k0={k0}", 1, params_for_degrees(1, n1, n2, lam)))
    for n1, n2, k0 in [(2, 2, 1), (3, 2, 0)]:
        lam = ("1/3", k0 - n2, 0)
        points.append((f"k=1 only k0 ({n1},{n2}) k0={k0}", 1, params_for_degrees(1, n1, n2, lam)))
    points.append(("k=1 non-natural n1", 1, params_for_degrees(1, "1/2", 1, GENERIC_LAMBDA)))
    points.append(("k=1 negative n2", 1, params_for_degrees(1, 1, -1, GENERIC_LAMBDA)))
    points.append(("k=1 parity flip", 1, params_for_degrees(1, 1, 1, GENERIC_LAMBDA, flip_parity=True)))
    for k in (0, 2):
        for n1, n2 in [(0, 0), (0, 2), (1, 1), (1, 3), (2, 2)]:
            points.append((f"k={k} n1<=n2 ({n1},{n2})", k, params_for_degrees(k, n1, n2, GENERIC_LAMBDA)))
        for n1, n2, k0 in [(1, 0, 0), (2, 1, 0), (2, 1, 1), (3, 1, 1)]:
            if k == 2:
                lam = (-k0 - n1 + n2, 0, "-1/5")
            else:
                lam = ("1/3", 0, n1 - k0)
            points.append((f"k={k} pivot ({n1},{n2}) k0={k0}", k, params_for_degrees(k, n1, n2, lam)))
        for n1, n2 in [(2, 1), (3, 0), (3, 2)]:
            points.append((f"k={k} no pivot ({n1},{n2})", k, params_for_degrees(k, n1, n2, GENERIC_LAMBDA)))
        points.append((f"k={k} parity flip", k, params_for_degrees(k, 1, 1, GENERIC_LAMBDA, flip_parity=True)))
    return points


def verify_n2_classification(p: InductionParams, k: int, label: str = "") -> CheckResult:
    """Solver dimension against the case analysis, and the closed forms against the solver."""
    def body():
        space = solve_kernels(p, k)
        predicted = predicted_dimension(p, k)
        closed = closed_form_basis(p, k)
        system = derive_system(k, 2, p)
        residual_free = all(not op.residual(kernel) for kernel in closed for op in system.values())
        spans = same_span(space.basis, closed)
        recurrence = k != 1 or all(recurrence_holds(kernel, p) for kernel in closed)
        details = {
            "label": label,
            "params": p.to_json(),
            "dimension": space.dimension,
            "predicted": predicted,
            "closed_forms_solve": residual_free,
            "same_span": spans,
            "recurrence": recurrence,
        }
        return space.dimension == predicted and residual_free and spans and recurrence, details

    return run_check(f"n2 classify k={k} {label}".rstrip(), "n2_classify", body)


def verify_closed_forms(p: InductionParams, k: int, label: str = "") -> CheckResult:
    """Closed-form kernels solve every equation of the system."""
    def body():
        closed = closed_form_basis(p, k)
        system = derive_system(k, 2, p)
        failing = [tag for tag, op in system.items() for kernel in closed if op.residual(kernel)]
        return not failing, {"label": label, "kernels": len(closed), "failing": sorted(set(failing))}

    return run_check(f"closed forms k={k} {label}".rstrip(), "closed_form", body)


def verify_generic_consistency(p: InductionParams, k: int) -> CheckResult:
    """At generic parameters the solver dimension equals the classification hint."""
    def body():
        if not is_generic(p):
            return False, {"error": "parameters are not generic"}
        hint = classify_generic(p, k)
        dimension = solve_kernels(p, k).dimension
        return dimension == hint.dimension_hint, {
            "params": p.to_json(),
            "dimension": dimension,
            "hint": hint.dimension_hint,
            "alpha": list(hint.alpha) if hint.alpha is not None else None,
        }

    return run_check(f"generic consistency k={k}", "generic_consistency", body)


# Constructive bases at k = 0, 2 (n = 2)
def constructive_operator(p: InductionParams, k: int) -> Tuple[Tuple[int, int], int]:
    """(alpha, m) such that (eps_H^{2,1})^m o rest_k o L_{alpha,k} spans the k = 0, 2 operators.

    k = 2 uses F_1^{alpha_1} F_2^{alpha_2}, k = 0 uses D_2^{alpha_1} D_3^{alpha_2}.
    For n1 <= n2 this is (n1, n2 - n1) resp. (n2 - n1, n1) with m = 0; for
    n1 > n2 it needs the pivot k0 and is (k0, n2 - k0) with m = n1 - k0.

    Raises:
        ValueError: "case preconditions violated" when the space is zero
    """
    if k not in (0, 2):
        raise ValueError(f"index out of range: constructive bases exist for k = 0, 2, got k={k}")
    data = case_data(p, k)
    if not data.admissible:
        raise ValueError(f"case preconditions violated: degrees ({data.n1}, {data.n2}) are not admissible")
    n1, n2 = int(data.n1), int(data.n2)
    if n1 <= n2:
        alpha = (n1, n2 - n1) if k == 2 else (n2 - n1, n1)
        return alpha, 0
    if not data.pivots:
        raise ValueError(f"case preconditions violated: n1={n1} > n2={n2} without a pivot")
    k0 = data.pivots[0]
    return (k0, n2 - k0), n1 - k0


def verify_constructive_basis(p: InductionParams, k: int, label: str = "") -> CheckResult:
    """The constructed operator is nonzero where the kernel space is one-dimensional.

    eps_H^{2,1} o rest_k = rest_k o eps^{s(2),s(1)}, so the composite is rest_k
    applied to one Weyl element and vanishes iff no derivative survives.
    """
    def body():
        alpha, m = constructive_operator(p, k)
        n = p.n
        entries = WeylEntries(n)
        W = build_L(alpha, k, p.lam, n, entries)
        if m:
            images = x_k_images(k, n)
            W = entries.epsilon(images.index(2) + 1, images.index(1) + 1) ** m * W
        surviving = restrict_operator(W, k)
        dimension = solve_kernels(p, k).dimension
        predicted = predicted_dimension(p, k)
        details = {
            "label": label,
            "params": p.to_json(),
            "alpha": list(alpha),
            "epsilon_power": m,
            "derivatives": len(surviving),
            "dimension": dimension,
            "predicted": predicted,
        }
        return bool(surviving) and dimension == 1 and predicted == 1, details

    return run_check(f"constructive basis k={k} {label}".rstrip(), "constructive_basis", body)
