"""Unit tests for kernels supported at the origin."""
import pytest
from sympy import Rational

from sbo_workbench.delta_model import (
    DeltaKernel,
    Generator,
    GeneratorKind,
    KernelCase,
    PdeOperator,
    act,
    catalogued_generators,
    closed_form_basis,
    closed_form_kernel,
    coordinate_names,
    degrees,
    lower_coordinates,
    params_for_degrees,
    predicted_dimension,
    same_span,
    solve_kernels,
    span_rank,
)
from sbo_workbench.exact_algebra import as_rational
from sbo_workbench.parameters import InductionParams

GENERIC_LAMBDA = ("1/3", "1/5", "1/7")


@pytest.fixture
def multiplicity_two_point():
    return params_for_degrees(1, 2, 2, [0, 1, 3])


@pytest.mark.unit
class TestCoordinates:
    """Chart coordinates of the lower unipotent group."""

    def test_order_at_n2(self):
        assert lower_coordinates(2) == [(2, 1), (3, 2), (3, 1)]
        assert coordinate_names(2) == ["x", "y", "z"]

    def test_generic_names(self):
        assert coordinate_names(3)[:3] == ["n21", "n32", "n43"]
        assert len(coordinate_names(3)) == 6


@pytest.mark.unit
class TestDeltaKernel:
    """Finite sums of derivatives of delta."""

    def test_derivative_raises_order(self):
        kernel = act(PdeOperator.partial("x"), DeltaKernel.delta((0, 0, 0)))
        assert kernel == DeltaKernel.delta((1, 0, 0))

    def test_coordinate_lowers_order(self):
        kernel = act(PdeOperator.coordinate("y"), DeltaKernel.delta((0, 3, 0)))
        assert kernel == DeltaKernel.delta((0, 2, 0), coefficient=-3)

    def test_coordinate_kills_delta(self):
        assert not act(PdeOperator.coordinate("z"), DeltaKernel.delta((0, 0, 0)))

    def test_arithmetic(self):
        a, b = DeltaKernel.delta((1, 0, 0)), DeltaKernel.delta((0, 1, 0))
        assert (a + b - a) == b
        assert (-a).coefficient((1, 0, 0)) == -1

    def test_size_mismatch(self):
        with pytest.raises(ValueError, match="size mismatch"):
            DeltaKernel.delta((1, 0))

    def test_normalized(self):
        kernel = DeltaKernel(2, {(0, 0, 1): 4, (1, 1, 0): 6}).normalized()
        assert kernel.coefficient((1, 1, 0)) == 1
        assert as_rational(kernel.coefficient((0, 0, 1))) == Rational(2, 3)

    def test_latex(self):
        assert DeltaKernel.delta((2, 0, 1)).to_latex() == "\\delta^{(2)}(x) \\delta^{(0)}(y) \\delta^{(1)}(z)"
        assert DeltaKernel(2).to_latex() == "0"

    def test_span(self):
        a, b = DeltaKernel.delta((1, 0, 0)), DeltaKernel.delta((0, 1, 0))
        assert span_rank([a, b, a + b]) == 2
        assert same_span([a], [a.scale(3)])
        assert not same_span([a], [b])

    def test_unbound_coordinate(self):
        with pytest.raises(ValueError, match="unbound name"):
            PdeOperator.coordinate("w")


@pytest.mark.unit
class TestGenerators:
    """Directions of the stabiliser."""

    def test_parse_round_trip(self):
        for tag in ("gamma1", "delta2", "E12"):
            assert Generator.parse(tag).tag == tag

    def test_unknown_tag(self):
        with pytest.raises(ValueError, match="unknown generator tag"):
            Generator.parse("rotation")

    def test_catalogue(self):
        assert [g.tag for g in catalogued_generators(1, 2)] == ["gamma1", "delta1", "E12"]
        assert [g.tag for g in catalogued_generators(0, 2)] == ["delta1", "delta2", "E12"]

    def test_lower_unipotent_rejected(self):
        with pytest.raises(ValueError, match="index out of range"):
            Generator(GeneratorKind.UNIPOTENT, 2, 1).h_matrix(2)

    def test_unipotent_has_no_sign(self):
        generator = Generator.parse("E12")
        assert generator.sign_character(InductionParams.symbolic(2, xi=(1, 1, 1)), 1) == 0
        assert generator.flipped_coordinates(1, 2) == []


@pytest.mark.unit
class TestCaseAnalysis:
    """Degrees, predicted dimensions and closed forms at n = 2."""

    def test_degrees_from_construction(self, multiplicity_two_point):
        assert degrees(multiplicity_two_point, 1) == (2, 2)
        assert multiplicity_two_point.nu_values() == [Rational(5, 2), Rational(1, 2)]

    def test_degree_index_out_of_range(self, multiplicity_two_point):
        with pytest.raises(ValueError, match="index out of range"):
            degrees(multiplicity_two_point, 3)

    def test_multiplicity_two(self, multiplicity_two_point):
        assert predicted_dimension(multiplicity_two_point, 1) == 2
        basis = closed_form_basis(multiplicity_two_point, 1)
        assert len(basis) == 2
        assert span_rank(basis) == 2

    def test_parity_violation(self):
        p = params_for_degrees(1, 2, 2, [0, 1, 3], flip_parity=True)
        assert predicted_dimension(p, 1) == 0
        assert closed_form_basis(p, 1) == []
        with pytest.raises(ValueError, match="case preconditions violated"):
            closed_form_kernel(1, KernelCase.FULL, p)

    def test_k2_closed_form(self):
        p = params_for_degrees(2, 1, 1, GENERIC_LAMBDA)
        assert predicted_dimension(p, 2) == 1
        kernel = closed_form_kernel(2, "full", p)
        assert kernel.orders() == [(1, 1, 0), (0, 0, 1)]
        assert kernel.coefficient((1, 1, 0)) == 1
        # (-1)(-n1)_1 (lambda1 - lambda2)_1 = 1/3 - 1/5
        assert as_rational(kernel.coefficient((0, 0, 1))) == Rational(2, 15)

    def test_unsupported_size(self):
        p = InductionParams.build([0, 0], ["1/2"])
        with pytest.raises(ValueError, match="unsupported n"):
            predicted_dimension(p, 0)
        with pytest.raises(ValueError, match="unsupported n"):
            solve_kernels(p, 0)


@pytest.mark.unit
class TestSupportAtZeroParity:
    """At k = 0 eta_1 follows the parity of n1 + n2 and eta_2 that of n1."""

    def test_derived_parity_rule(self):
        p = params_for_degrees(0, 0, 1, GENERIC_LAMBDA)
        assert p.eta == (1, 0)
        assert predicted_dimension(p, 0) == 1
        assert solve_kernels(p, 0).dimension == 1

    def test_exchanged_parity_rule_gives_nothing(self):
        derived = params_for_degrees(0, 0, 1, GENERIC_LAMBDA)
        exchanged = InductionParams.build(derived.lam, derived.nu, xi=(0, 0, 0), eta=(0, 1))
        assert degrees(exchanged, 0) == (0, 1)
        assert predicted_dimension(exchanged, 0) == 0
        assert solve_kernels(exchanged, 0).dimension == 0

    def test_delta1_flips_y_and_z(self):
        tags = {generator.tag: generator for generator in catalogued_generators(0, 2)}
        assert tags["delta1"].flipped_coordinates(0, 2) == [1, 2]
