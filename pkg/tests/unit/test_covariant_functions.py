"""Unit tests for covariant functions, the kernel and restriction."""
import pytest

from sbo_workbench.covariant_functions import (
    FunctionCombination,
    FunctionKind,
    MinorKind,
    apply_weyl,
    catalogue,
    conjugation_is_upper_unipotent,
    entry,
    entry_ring,
    h_entry,
    kernel_K,
    left_equivariance_holds,
    minor,
    phi_psi,
    restrict_k,
    restrict_operator,
    x_k_images,
    x_k_matrix,
)
from sbo_workbench.exact_algebra import AffineForm
from sbo_workbench.parameters import InductionParams
from sbo_workbench.weyl_algebra import epsilon


@pytest.mark.unit
class TestCatalogue:
    """Minors and the Phi / Psi polynomials."""

    def test_ring_sizes(self):
        assert entry_ring(1).ngens == 4
        assert entry_ring(2).ngens == 9

    def test_minors_at_n1(self):
        assert minor(MinorKind.KAPPA, 1, 1) == entry(1, 2, 1)
        assert minor(MinorKind.KAPPA, 2, 1) == entry(1, 1, 1) * entry(1, 2, 2) - entry(1, 1, 2) * entry(1, 2, 1)
        assert minor(MinorKind.THETA, 1, 1) == entry(1, 1, 1)

    def test_catalogue_labels(self):
        assert [label for label, _ in catalogue(2)] == ["kappa1", "kappa2", "kappa3", "theta1", "theta2"]

    def test_phi_psi_at_n1(self):
        assert phi_psi(FunctionKind.PHI, 1, 1) == entry(1, 2, 1)
        assert phi_psi(FunctionKind.PHI, 2, 1) == entry(1, 2, 2)
        assert phi_psi(FunctionKind.PSI, 2, 1) == entry(1, 1, 1)
        assert phi_psi(FunctionKind.PSI, 1, 1) == entry(1, 1, 2)

    def test_phi_index_out_of_range(self):
        with pytest.raises(ValueError, match="index out of range"):
            phi_psi(FunctionKind.PHI, 4, 2)

    @pytest.mark.parametrize("n", [1, 2])
    def test_left_equivariance(self, n):
        assert left_equivariance_holds(n)


@pytest.mark.unit
class TestKernelAction:
    """Operators acting on the formal-power kernel."""

    def test_column_euler_on_kernel(self):
        p = InductionParams.symbolic(1)
        K = kernel_K(p)
        # kappa1, kappa2 and theta1 are all linear in column 1: weight s1 + s2 + t1 = lambda1 - 1/2
        weight = AffineForm.symbol("lambda1") - AffineForm.coerce("1/2")
        assert apply_weyl(epsilon(1, 1, 1), K) == K.as_combination().scale(weight)

    def test_polynomial_round_trip(self):
        poly = entry(1, 1, 2) ** 2 + entry(1, 2, 1)
        assert FunctionCombination.from_polynomial(poly, 1).to_polynomial() == poly

    def test_size_mismatch(self):
        K = kernel_K(InductionParams.symbolic(1))
        with pytest.raises(ValueError, match="size mismatch"):
            apply_weyl(epsilon(1, 1, 2), K)

    def test_unsupported_mode(self):
        with pytest.raises(ValueError, match="unsupported kernel mode"):
            kernel_K(InductionParams.symbolic(1), mode="distribution")


@pytest.mark.unit
class TestRestriction:
    """f -> f(diag(h, 1) x_k)."""

    def test_x_k_images(self):
        assert x_k_images(0, 2) == [3, 1, 2]
        assert x_k_images(1, 2) == [1, 3, 2]
        assert x_k_images(2, 2) == [1, 2, 3]

    def test_x_k_matrix_is_permutation(self):
        x = x_k_matrix(0, 2)
        assert x * x.T == x.T * x
        assert sum(x) == 3

    @pytest.mark.parametrize("n,k", [(1, 0), (1, 1), (2, 0), (2, 1), (2, 2)])
    def test_conjugation_stays_upper_unipotent(self, n, k):
        assert conjugation_is_upper_unipotent(k, n)

    def test_restrict_entries(self):
        assert restrict_k(entry(1, 1, 1), 1, 1) == h_entry(1, 1, 1)
        assert restrict_k(entry(1, 2, 2), 1, 1) == 1
        assert restrict_k(entry(1, 1, 2), 1, 1) == 0

    def test_restrict_fractional_powers(self):
        K = kernel_K(InductionParams.symbolic(1)).as_combination()
        with pytest.raises(ValueError, match="polynomial layer only"):
            restrict_k(K, 1)

    def test_restrict_operator(self):
        collected = restrict_operator(epsilon(1, 1, 1), 1)
        assert collected == {(1, 0, 0, 0): h_entry(1, 1, 1)}


@pytest.mark.unit
class TestCollapse:
    """Combinations brought to a single summand."""

    @pytest.fixture
    def exponents(self):
        return kernel_K(InductionParams.symbolic(1)).exponents

    def test_merges_offsets(self, exponents):
        kappa1 = minor(MinorKind.KAPPA, 1, 1)
        R = entry_ring(1)
        f = FunctionCombination(1, exponents, {(1, 0, 0): R.one, (0, 0, 0): kappa1 * 2})
        collapsed = f.collapse()
        assert list(collapsed.summands) == [(1, 0, 0)]
        assert collapsed.summands[(1, 0, 0)] == 3
        assert collapsed == f

    def test_cancellation_gives_zero(self, exponents):
        kappa1 = minor(MinorKind.KAPPA, 1, 1)
        f = FunctionCombination(1, exponents, {(1, 0, 0): entry_ring(1).one, (0, 0, 0): -kappa1})
        assert not f.collapse()

    def test_negative_offsets(self, exponents):
        theta1 = minor(MinorKind.THETA, 1, 1)
        f = FunctionCombination(1, exponents, {(0, 0, -1): theta1 ** 2})
        assert f.collapse().summands == {(0, 0, 1): entry_ring(1).one}
