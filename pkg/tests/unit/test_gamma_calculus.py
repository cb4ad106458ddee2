"""Unit tests for Gamma expressions, c-functions and the scalar bookkeeping."""
from itertools import product

import pytest
from sympy import Rational

from sbo_workbench.exact_algebra import AffineForm, gens_by_name, lambda_forms, parameter_field
from sbo_workbench.gamma_calculus import (
    GammaExpr,
    WeylWord,
    bs_scalar,
    c_function,
    canonicalize,
    e_functions,
    equivalent,
    gamma_factor_pairs,
    gamma_normalizer,
    functional_equation_scalar,
    gamma_ratio,
    proportional,
    residue_scalar_check,
    simple_c_function,
    transpose_scalar,
    x_k_params,
)
from sbo_workbench.parameters import InductionParams

LAM1 = AffineForm.symbol("lambda1")


@pytest.fixture
def K1():
    return parameter_field(1)


@pytest.mark.unit
class TestCanonicalize:
    """Integer shifts become Pochhammer prefactors."""

    def test_gamma_of_one(self, K1):
        assert GammaExpr.gamma(K1, 4).is_one()

    def test_shift_ratio(self, K1):
        ratio = canonicalize(GammaExpr.gamma(K1, LAM1 + 2) / GammaExpr.gamma(K1, LAM1))
        assert ratio.is_gamma_free
        assert ratio.prefactor == gens_by_name(K1)["lambda1"] / 2
        assert ratio.is_polynomial

    def test_half_integer_constants(self, K1):
        canonical = canonicalize(GammaExpr.gamma(K1, 1, 2))
        assert canonical.is_gamma_free
        assert canonical.pi_power == 1

    def test_pole(self, K1):
        with pytest.raises(ValueError, match="Gamma pole"):
            canonicalize(GammaExpr.gamma(K1, 0))

    def test_idempotent(self, K1):
        e = GammaExpr.build(K1, 3, [(LAM1 + 5, 1), (-LAM1 - 3, -1), (LAM1 * -1 + Rational(1, 2), 1)])
        once = canonicalize(e)
        assert canonicalize(once) == once

    def test_proportional(self, K1):
        gamma = GammaExpr.gamma(K1, LAM1 + 1)
        assert proportional(gamma * 3, gamma)
        assert not proportional(GammaExpr.gamma(K1, LAM1 + 2), GammaExpr.gamma(K1, LAM1))

    def test_names(self, K1):
        e = GammaExpr.build(K1, gens_by_name(K1)["nu1"], [(LAM1, 1)])
        assert e.names() == ("lambda1", "nu1")
        assert not e.is_free_of(["lambda"])


@pytest.mark.unit
class TestWeylWords:
    """Reduced words in S_n."""

    def test_longest(self):
        word = WeylWord.longest(3)
        assert word.letters == (1, 2, 1)
        assert word.is_reduced()

    def test_non_reduced(self):
        assert not WeylWord((1, 1), 3).is_reduced()

    def test_act(self):
        assert WeylWord((1,), 3).act(["a", "b", "c"]) == ["b", "a", "c"]
        assert WeylWord((1, 2), 3).act(["a", "b", "c"]) == ["b", "c", "a"]

    def test_letter_out_of_range(self):
        with pytest.raises(ValueError, match="index out of range"):
            WeylWord((3,), 3)


@pytest.mark.unit
class TestCFunctions:
    """Harish-Chandra c-functions."""

    @pytest.mark.parametrize("xi", list(product((0, 1), repeat=2)))
    def test_simple_c_function_is_reflection_invariant(self, K1, xi):
        lam = lambda_forms(1)
        swapped = simple_c_function(1, xi[::-1], lam[::-1], K1)
        assert equivalent(swapped, simple_c_function(1, xi, lam, K1))

    def test_empty_word(self):
        assert c_function(WeylWord((), 3), (0, 0, 0), lambda_forms(2)).is_one()

    def test_product_over_letters(self):
        K = parameter_field(2)
        lam, xi = lambda_forms(2), (1, 0, 0)
        first = WeylWord((1,), 3)
        expected = simple_c_function(1, xi, lam, K) * simple_c_function(2, first.act(xi), first.act(lam), K)
        assert equivalent(c_function(WeylWord((1, 2), 3), xi, lam, K), expected)

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="size mismatch"):
            c_function(WeylWord((1,), 3), (0, 0), lambda_forms(1))

    def test_e_function_side(self):
        with pytest.raises(ValueError, match="unknown side"):
            e_functions("K", (0, 0), lambda_forms(1))


@pytest.mark.unit
class TestScalarIdentities:
    """Transpose lemma, gamma ratio and residue bookkeeping."""

    @pytest.mark.parametrize("xi", list(product((0, 1), repeat=2)))
    def test_transpose_scalar_is_one(self, xi):
        assert transpose_scalar(xi).is_one()

    @pytest.mark.parametrize("xi,eta", [(xi, eta) for xi in product((0, 1), repeat=2) for eta in ((0,), (1,))])
    def test_gamma_ratio_trivial_at_n1(self, xi, eta):
        assert gamma_ratio(InductionParams.symbolic(1, xi=xi, eta=eta)).is_one()

    @pytest.mark.parametrize("k", [0, 1])
    @pytest.mark.parametrize("xi", [(0, 0), (1, 0)])
    def test_residue_scalar_n1(self, k, xi):
        report = residue_scalar_check(k, 1, xi)
        assert report.passed, report.details

    def test_residue_index_out_of_range(self):
        with pytest.raises(ValueError, match="index out of range"):
            residue_scalar_check(3, 2)

    def test_bs_scalar_kind(self):
        with pytest.raises(ValueError, match="unknown Bernstein-Sato scalar kind"):
            bs_scalar("r", 1, 1, InductionParams.symbolic(1))

    def test_order_independence(self):
        p = InductionParams.symbolic(2)
        first = functional_equation_scalar((1, 1), 1, p, "F-first")
        second = functional_equation_scalar((1, 1), 1, p, "D-first")
        assert equivalent(first, second)

    def test_unknown_order(self):
        with pytest.raises(ValueError, match="unknown composition order"):
            functional_equation_scalar((1, 1), 1, InductionParams.symbolic(2), "random")


@pytest.mark.unit
class TestNormalizer:
    """gamma(xi, lambda, eta, nu) and the e-functions."""

    def test_factor_pairs(self):
        lower, upper = gamma_factor_pairs(2)
        assert lower == [(1, 1), (1, 2), (2, 1)]
        assert upper == [(2, 2), (3, 1), (3, 2)]

    def test_normalizer_at_n1(self):
        gamma = gamma_normalizer(InductionParams.symbolic(1))
        lam1, lam2, nu1 = (AffineForm.symbol(name) for name in ("lambda1", "lambda2", "nu1"))
        arguments = {argument for argument, exponent in gamma.factors if exponent == 1}
        assert len(gamma.factors) == 2
        assert arguments == {lam1 - nu1 + Rational(1, 2), nu1 - lam2 + Rational(1, 2)}

    def test_normalizer_parity_shift(self):
        gamma = gamma_normalizer(InductionParams.symbolic(1, xi=(1, 0)))
        lam1, nu1 = AffineForm.symbol("lambda1"), AffineForm.symbol("nu1")
        assert (lam1 - nu1 + Rational(3, 2), 1) in gamma.factors

    def test_skip(self):
        assert len(gamma_normalizer(InductionParams.symbolic(1), skip=[(1, 1)]).factors) == 1

    def test_e_function_at_constants(self):
        e = e_functions("G", (0, 0), ["3", "1"])
        assert [(argument.constant, exponent) for argument, exponent in e.factors] == [(3, -1)]

    def test_e_function_length_mismatch(self):
        with pytest.raises(ValueError):
            e_functions("H", (0,), ["3", "1"])


@pytest.mark.unit
class TestRestrictionTarget:
    """Parameters of the H-side after x_k."""

    def test_position_moves_last(self):
        p = InductionParams.build([1, 2, 3], [4, 5], xi=(1, 0, 0), eta=(0, 1))
        q = x_k_params(p, 0)
        assert q.lam_values() == [2, 3, 1]
        assert q.xi == (0, 0, 1)
        assert q.nu_values() == [5, 4]
        assert q.eta == (1, 0)

    def test_last_position_is_fixed(self):
        p = InductionParams.build([1, 2, 3], [4, 5], xi=(1, 0, 1))
        q = x_k_params(p, 2)
        assert q.lam_values() == [1, 2, 3]
        assert q.xi == (1, 0, 1)
