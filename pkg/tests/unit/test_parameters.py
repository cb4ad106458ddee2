"""Unit tests for parameter bookkeeping and the generic classification."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Rational

from sbo_workbench.exact_algebra import AffineForm
from sbo_workbench.parameters import (
    InductionParams,
    bracket,
    classify_generic,
    epsilon_intertwiner_target,
    is_generic,
    multiplicity_two_params,
    restriction_params,
    shift_params,
    spectral_map_rank,
    to_spectral,
)


@pytest.mark.unit
class TestBracket:
    """[m] for integers."""

    def test_values(self):
        assert bracket(3) == 1
        assert bracket(-2) == 0
        assert bracket("4") == 0

    def test_non_integer(self):
        with pytest.raises(ValueError, match="non-integer"):
            bracket("1/2")

    @given(a=st.integers(-1000, 1000), b=st.integers(-1000, 1000))
    @settings(max_examples=100, deadline=None)
    def test_additive_mod_two(self, a, b):
        assert bracket(a + b) == (bracket(a) + bracket(b)) % 2


@pytest.mark.unit
class TestInductionParams:
    """Construction, validation and substitution."""

    def test_symbolic(self):
        p = InductionParams.symbolic(2)
        assert p.n == 2
        assert p.xi == (0, 0, 0)
        assert not p.is_numeric

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="size mismatch"):
            InductionParams.build(["0", "0"], ["0", "0"])

    def test_bad_parity(self):
        with pytest.raises(ValueError, match="parity vector"):
            InductionParams.build(["0", "0", "0"], ["0", "0"], xi=(2, 0, 0))

    def test_substitute_to_numeric(self):
        p = InductionParams.symbolic(1).substitute({"lambda1": 1, "lambda2": "1/3", "nu1": 0})
        assert p.is_numeric
        assert p.assignment() == {"lambda1": 1, "lambda2": Rational(1, 3), "nu1": 0}

    def test_assignment_needs_numbers(self):
        with pytest.raises(ValueError):
            InductionParams.symbolic(1).assignment()

    def test_shifted(self):
        p = InductionParams.build([0, 0], [0], xi=(1, 0))
        q = p.shifted(d_lam=(1, -1), d_xi=(1, 1))
        assert q.lam_values() == [1, -1]
        assert q.xi == (0, 1)

    def test_to_json(self):
        data = InductionParams.build(["1/2", 0], ["-3"]).to_json()
        assert data == {"n": 1, "xi": [0, 0], "lambda": ["1/2", "0"], "eta": [0], "nu": ["-3"]}


@pytest.mark.unit
class TestSpectralParameters:
    """(lambda, nu) -> (s, t) and the restriction targets."""

    def test_exponents_at_n1(self):
        spectral = to_spectral(InductionParams.symbolic(1))
        lam1, lam2, nu1 = (AffineForm.symbol(name) for name in ("lambda1", "lambda2", "nu1"))
        assert spectral.s == (lam1 - nu1 - Rational(1, 2), lam2 + Rational(1, 2))
        assert spectral.t == (nu1 - lam2 - Rational(1, 2),)

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_spectral_map_is_injective(self, n):
        assert spectral_map_rank(n) == 2 * n + 1

    def test_restriction_params(self):
        p = InductionParams.symbolic(2, xi=(1, 0, 1))
        target = restriction_params(p, 1)
        lam1, lam3 = AffineForm.symbol("lambda1"), AffineForm.symbol("lambda3")
        assert target.eta == (1, 1)
        assert target.nu == (lam1 + Rational(1, 2), lam3 - Rational(1, 2))

    def test_shift_params(self):
        p = InductionParams.symbolic(2)
        target = shift_params(p, 1, (1, 2))
        lam1, lam3 = AffineForm.symbol("lambda1"), AffineForm.symbol("lambda3")
        assert target.nu == (lam1 + Rational(3, 2), lam3 - Rational(5, 2))
        assert target.eta == (1, 0)


@pytest.mark.unit
class TestClassifyGeneric:
    """Membership in L_k at generic points."""

    def test_member(self):
        result = classify_generic(InductionParams.build(["1/3", 0], ["-5/2"]), 0)
        assert result.member_of_L_k
        assert result.alpha == (2,)
        assert result.dimension_hint == 1

    def test_beta_not_natural(self):
        result = classify_generic(InductionParams.build(["1/3", 0], ["-1"]), 0)
        assert not result.member_of_L_k
        assert result.dimension_hint == 0
        assert any("not in N" in reason for reason in result.reasons)

    def test_parity_condition(self):
        odd = InductionParams.build(["1/3", 0], ["-3/2"])
        assert not classify_generic(odd, 0).member_of_L_k
        assert classify_generic(InductionParams.build(["1/3", 0], ["-3/2"], eta=(1,)), 0).member_of_L_k

    def test_symbolic_rejected(self):
        with pytest.raises(ValueError):
            classify_generic(InductionParams.symbolic(1), 0)

    def test_non_generic_flag(self):
        result = classify_generic(InductionParams.build([1, 0], ["-5/2"]), 0)
        assert result.not_generic
        assert not is_generic(InductionParams.build([1, 0], ["-5/2"]))


@pytest.mark.unit
class TestSpecialParameters:
    """Multiplicity-two points and the eps intertwiners."""

    def test_multiplicity_two_point(self):
        p = multiplicity_two_params(0, 2, 2, 0, 1)
        assert p.lam_values() == [0, 1, 3]
        assert p.nu_values() == [Rational(5, 2), Rational(1, 2)]
        assert p.eta == (0, 0)

    def test_multiplicity_two_preconditions(self):
        with pytest.raises(ValueError, match="case preconditions violated"):
            multiplicity_two_params(0, 2, 2, 1, 0)

    def test_g_side_intertwiner(self):
        xi, lam = epsilon_intertwiner_target("G", 2, (0, 1, 1), (0, 1, 3))
        assert xi == (0, 1, 1)
        assert [v.constant for v in lam] == [0, 3, 1]

    def test_h_side_intertwiner(self):
        eta, nu = epsilon_intertwiner_target("H", 1, (0, 0), ("1/2", "3/2"))
        assert eta == (1, 1)
        assert [v.constant for v in nu] == [Rational(3, 2), Rational(1, 2)]

    def test_intertwiner_needs_integrality(self):
        with pytest.raises(ValueError):
            epsilon_intertwiner_target("G", 1, (0, 0, 0), (0, 1, 3))
