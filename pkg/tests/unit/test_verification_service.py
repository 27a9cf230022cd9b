"""Unit tests for VerificationService."""
import pytest

from app.services.kernels import v_heat
from app.services.verification_service import (
    QUICK,
    VerificationService,
    hermite_limit_errors,
    ks_allowance,
    relative_error,
)


@pytest.fixture
def service():
    return VerificationService(seed=11, profile=QUICK)


class TestHelpers:
    """Test cases for the tolerance helpers."""

    def test_relative_error(self):
        assert relative_error(1.1, 1.0) == pytest.approx(0.1)
        assert relative_error(0.0, 0.0) == 0.0

    def test_ks_allowance(self):
        assert ks_allowance(0.02, 100_000) == 0.02
        assert ks_allowance(0.02, 400) == pytest.approx(1.63 / 20.0)

    def test_hermite_leading_error_cancels(self):
        """At the worst grid point the raw gap exceeds 0.02 but its leading term cancels."""
        coarse = hermite_limit_errors(1e4, -0.5, -1.0)[1]
        fine = hermite_limit_errors(8e4, -0.5, -1.0)[1]
        assert abs(fine) < abs(coarse)
        assert abs(2.0 * fine - coarse) < 0.02


class TestRunVerify:
    """Test cases for run_verify on cheap checks."""

    def test_simulator_checks_pass(self, service):
        summary = service.run_verify(["oracle", "coupling", "ordering"])
        assert [check.name for check in summary.checks] == [
            "oracle_equivalence", "coupling_order", "coupling_sandwich", "ordering",
        ]
        assert summary.passed, summary.failures
        assert summary.seed == 11

    def test_identity_checks_pass(self, service):
        summary = service.run_verify(["semigroup", "heat_representation", "f_decomposition", "det_identity", "det_multiplicativity"])
        assert summary.passed, summary.failures

    def test_unknown_check(self, service):
        with pytest.raises(ValueError):
            service.run_verify(["oracle", "nonexistent"])

    def test_perturbed_heat_kernel_fails(self):
        def inflated(r1, s1, r2, s2):
            return 1.01 * v_heat(r1, s1, r2, s2)

        summary = VerificationService(seed=11, profile=QUICK, heat_kernel=inflated).run_verify(["semigroup"])
        assert not summary.passed
        assert summary.failures[0].name == "v_semigroup"

    def test_coarse_grid_fails_self_convergence(self):
        summary = VerificationService(seed=11, profile=QUICK, nodes=8).run_verify(["self_convergence"])
        assert not summary.passed

    def test_lab_error_becomes_failed_row(self):
        summary = VerificationService(seed=11, profile=QUICK, nodes=4).run_verify(["self_convergence"])
        (row,) = summary.checks
        assert row.name == "self_convergence"
        assert not row.passed
        assert "QuadratureError" in row.detail

    @pytest.mark.slow
    def test_determinant_identities_pass(self, service):
        summary = service.run_verify(["tracy_widom", "factorization", "first_factor", "pathintegral"])
        assert summary.passed, summary.failures


class TestDistributionalChecks:
    """The Burke, supremum and Hermite checks at the default seed."""

    @pytest.fixture
    def default_seed_service(self):
        return VerificationService(profile=QUICK)

    def test_hermite_checks_pass(self, default_seed_service):
        summary = default_seed_service.run_verify(["hermite"])
        assert [check.name for check in summary.checks] == [
            "hermite_alpha_limit", "hermite_beta_limit",
            "hermite_alpha_rate", "hermite_beta_rate", "hermite_product",
        ]
        assert summary.passed, summary.failures

    def test_burke_checks_pass(self, default_seed_service):
        summary = default_seed_service.run_verify(["burke"])
        assert [check.name for check in summary.checks] == ["burke_gap_ks", "burke_mean_z", "burke_variance_z"]
        assert summary.passed, summary.failures

    def test_sup_checks_pass(self, default_seed_service):
        summary = default_seed_service.run_verify(["sup"])
        assert [check.name for check in summary.checks] == ["sup_exponential_rho0.5", "sup_exponential_rho1"]
        assert summary.passed, summary.failures

    def test_ordering_has_no_violations(self, service):
        summary = service.run_verify(["oracle", "ordering"])
        ordering = summary.checks[-1]
        assert ordering.name == "ordering"
        assert ordering.measured == 0
