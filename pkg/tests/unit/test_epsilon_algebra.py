"""Unit tests for the Heisenberg words and rest_1 normal forms at n = 2."""
import pytest

from sbo_workbench.epsilon_algebra import (
    EpsilonElement,
    EpsilonEntries,
    NormalFormExpansion,
    expand_rest1_FD,
    expansion_prefactor,
    multiply_words,
)
from sbo_workbench.exact_algebra import gens_by_name, parameter_field


@pytest.fixture
def lam():
    gens = gens_by_name(parameter_field(2))
    return gens["lambda1"], gens["lambda2"], gens["lambda3"]


@pytest.mark.unit
class TestWords:
    """X^a Y^b Z^c with [Y, X] = Z."""

    def test_y_past_x(self):
        assert multiply_words((0, 1, 0), (1, 0, 0)) == {(1, 1, 0): 1, (0, 0, 1): 1}

    def test_already_ordered(self):
        assert multiply_words((1, 0, 0), (0, 1, 0)) == {(1, 1, 0): 1}

    def test_z_is_central(self):
        assert multiply_words((0, 0, 1), (2, 0, 0)) == {(2, 0, 1): 1}

    def test_heisenberg_relation(self):
        X, Y, Z = EpsilonElement.word(1, 0, 0), EpsilonElement.word(0, 1, 0), EpsilonElement.word(0, 0, 1)
        assert Y * X - X * Y == Z

    def test_y2_x2(self):
        # Y^2 X^2 = X^2 Y^2 + 4 XYZ + 2 Z^2
        assert multiply_words((0, 2, 0), (2, 0, 0)) == {(2, 2, 0): 1, (1, 1, 1): 4, (0, 0, 2): 2}

    def test_upper_field_rejected(self):
        with pytest.raises(ValueError, match="not a lower vector field"):
            EpsilonEntries().epsilon(1, 2)


@pytest.mark.unit
class TestRestrictedExpansion:
    """rest_1 o F_1^n o D_3^m in normal order."""

    def test_empty_composite(self):
        expansion = expand_rest1_FD(0, 0)
        assert expansion.words() == [(0, 0, 0)]
        assert expansion.det_power == 0

    def test_single_d3(self, lam):
        # only the Phi_2 Y term of D_3 survives rest_1
        expansion = expand_rest1_FD(0, 1)
        assert expansion.words() == [(0, 1, 0)]
        assert expansion.coefficient(0, 1, 0) == -(lam[2] - lam[0] - 1)
        assert expansion.det_power == 0

    def test_single_f1(self, lam):
        expansion = expand_rest1_FD(1, 0)
        assert expansion.words() == [(1, 0, 0)]
        assert expansion.coefficient(1, 0, 0) == lam[0] - lam[2] + 1
        assert expansion.det_power == 1

    def test_single_f1_matches_prefactor(self):
        assert expand_rest1_FD(1, 0).coefficient(1, 0, 0) == expansion_prefactor(1, 0)

    def test_negative_power(self):
        with pytest.raises(ValueError, match="powers must be natural"):
            expand_rest1_FD(-1, 0)

    def test_prefactor(self, lam):
        assert expansion_prefactor(0, 3) == 1
        assert expansion_prefactor(2, 1) == (lam[0] - lam[2] + 2) * (lam[0] - lam[2] + 3)


@pytest.mark.unit
class TestNormalFormExpansion:
    """Bookkeeping on the word tables."""

    def test_zero_coefficients_dropped(self):
        expansion = NormalFormExpansion({(0, 0, 0): 0, (1, 0, 0): 2})
        assert expansion.words() == [(1, 0, 0)]
        assert not expansion.is_zero()
        assert NormalFormExpansion().is_zero()

    def test_shift_and_scale(self):
        expansion = NormalFormExpansion({(1, 0, 0): 2}, 1).shift_words(dc=1).scale(3)
        assert expansion.coefficient(1, 0, 1) == 6
        assert expansion.det_power == 1

    def test_substitute(self):
        expansion = expand_rest1_FD(1, 0).substitute({"lambda1": 4, "lambda2": 0, "lambda3": 1})
        assert expansion.coefficient(1, 0, 0) == 4

    def test_to_json(self):
        data = NormalFormExpansion({(0, 1, 0): 5}, 2).to_json()
        assert data == {"det_power": 2, "terms": [{"word": [0, 1, 0], "coeff": "5"}]}
