"""Unit tests for the Weyl algebra and the source operators."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational

from sbo_workbench.covariant_functions import entry
from sbo_workbench.exact_algebra import lambda_forms
from sbo_workbench.weyl_algebra import (
    WeylElement,
    as_scalar,
    build_D,
    build_F,
    build_L,
    build_power,
    epsilon,
    factor_sequence,
    iter_epsilons,
    ordered_det,
    random_weyl_element,
    residue_operator,
    shift_lambda,
)


@pytest.mark.unit
class TestNormalOrdering:
    """Products are brought back to normal order."""

    def test_canonical_commutator(self):
        d = WeylElement.partial(1, 1, 2)
        g = WeylElement.coordinate(1, 1, 2)
        assert d * g - g * d == 1

    def test_square_of_derivative_past_coordinate(self):
        d = WeylElement.partial(1, 2, 2)
        g = WeylElement.coordinate(1, 2, 2)
        # d^2 g = g d^2 + 2 d
        assert d ** 2 * g == g * d ** 2 + d.scale(2)

    def test_zero_power_is_identity(self):
        assert epsilon(2, 1, 1) ** 0 == WeylElement.identity(2)

    def test_negative_power(self):
        with pytest.raises(ValueError):
            epsilon(2, 1, 1) ** -1

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="size mismatch"):
            epsilon(1, 1, 1) + epsilon(1, 1, 2)

    def test_order_and_scalar(self):
        assert (epsilon(1, 2, 1) ** 3).order() == 3
        assert WeylElement.scalar(Rational(3, 2), 2).is_scalar()
        assert as_scalar(WeylElement.scalar(Rational(3, 2), 2)) == Rational(3, 2)

    def test_non_scalar_rejected(self):
        with pytest.raises(ValueError, match="not a scalar"):
            as_scalar(epsilon(1, 2, 1))

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_associativity(self, rng):
        a, b, c = (random_weyl_element(rng, 1) for _ in range(3))
        assert (a * b) * c == a * (b * c)

    @given(st.randoms(use_true_random=False))
    @settings(max_examples=60, deadline=None)
    def test_distributivity(self, rng):
        a, b, c = (random_weyl_element(rng, 1) for _ in range(3))
        assert a * (b + c) == a * b + a * c


@pytest.mark.unit
class TestEpsilon:
    """Right-regular vector fields eps^{i,j}."""

    @pytest.mark.parametrize("i,j,k,l", [(1, 2, 2, 3), (2, 1, 1, 2), (3, 1, 1, 3), (1, 1, 2, 2), (2, 3, 1, 2)])
    def test_commutation_relation(self, i, j, k, l):
        n = 2
        expected = epsilon(i, j, n).zero_like()
        if j == k:
            expected = expected + epsilon(i, l, n)
        if l == i:
            expected = expected - epsilon(k, j, n)
        assert epsilon(i, j, n).commutator(epsilon(k, l, n)) == expected

    def test_column_euler_operator(self):
        det = entry(1, 1, 1) * entry(1, 2, 2) - entry(1, 1, 2) * entry(1, 2, 1)
        assert epsilon(1, 1, 1).apply(det) == det
        assert epsilon(1, 2, 1).apply(det) == 0

    def test_index_out_of_range(self):
        with pytest.raises(ValueError, match="index out of range"):
            epsilon(4, 1, 2)

    def test_iter_epsilons(self):
        assert len(list(iter_epsilons(2))) == 9


@pytest.mark.unit
class TestSourceOperators:
    """D_i, F_i, their powers and L_{alpha,k}."""

    def test_d1_is_multiplication(self):
        D1 = build_D(1, lambda_forms(1), 1)
        assert D1.order() == 0
        assert D1.apply(entry(1, 1, 1).ring.one) == entry(1, 2, 1)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError, match="index out of range"):
            build_D(5, lambda_forms(2), 2)

    def test_lambda_size_mismatch(self):
        with pytest.raises(ValueError, match="size mismatch"):
            build_F(1, ["0", "0"], 2)

    def test_shift_lambda(self):
        assert shift_lambda("D", 2, [5, 5, 5]) == [5, 4, 5]
        assert shift_lambda("F", 1, [5, 5, 5]) == [5, 4, 4]

    def test_factor_sequence_threads_lambda(self):
        lam = [0, 0, 0]
        sequence = factor_sequence((1, 1), 1, lam, 2)
        assert [(kind, i) for kind, i, _ in sequence] == [("D", 3), ("F", 1)]
        assert sequence[1][2] == [0, 0, -1]

    def test_power_composes_shifted_factors(self):
        lam = lambda_forms(1)
        expected = build_D(2, shift_lambda("D", 2, lam), 1) * build_D(2, lam, 1)
        assert build_power("D", 2, 2, lam, 1) == expected

    def test_power_zero_is_identity(self):
        assert build_power("F", 1, 0, lambda_forms(1), 1) == WeylElement.identity(2)

    def test_unknown_kind(self):
        with pytest.raises(ValueError, match="unknown operator kind"):
            build_power("G", 1, 1, lambda_forms(1), 1)

    def test_L_is_F1_after_D3(self):
        lam = lambda_forms(2)
        expected = build_F(1, shift_lambda("D", 3, lam), 2) * build_D(3, lam, 2)
        assert build_L((1, 1), 1, lam, 2) == expected

    def test_ordered_det_non_square(self):
        with pytest.raises(ValueError, match="non-square"):
            ordered_det([[epsilon(1, 1, 1), 0]])

    def test_latex_and_json(self):
        D2 = build_D(2, lambda_forms(1), 1)
        assert "g_{" in D2.to_latex()
        assert all({"x", "d", "coeff"} <= set(term) for term in D2.to_json())
        assert WeylElement(2).to_latex() == "0"


@pytest.mark.unit
class TestResidueOperator:
    """Differential residues of the normalised intertwiner."""

    def test_j_zero_even_is_identity(self):
        assert residue_operator(1, 0, 0, 1) == 1

    def test_j_one_even(self):
        assert residue_operator(1, 1, 0, 1) == (epsilon(2, 1, 1) ** 2).scale(Rational(-1, 2))

    def test_j_zero_odd(self):
        assert residue_operator(1, 0, 1, 1) == epsilon(2, 1, 1)

    def test_bad_parity(self):
        with pytest.raises(ValueError):
            residue_operator(1, 0, 2, 1)
