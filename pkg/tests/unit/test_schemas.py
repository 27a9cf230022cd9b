"""Unit tests for validation in the pydantic schemas."""
import numpy as np
import pytest
from pydantic import ValidationError

from app.schemas.experiment import CdfRow, CheckResult, ComparisonReport, ExperimentConfig, VerifySummary
from app.schemas.frame import ModelParams, ScalingFrame
from app.schemas.numerics import DetResult, HermitePoint
from app.schemas.simulation import InitialConfig, NoiseGrid, SimulationConfig


class TestFrame:
    """Test cases for ModelParams and ScalingFrame."""

    def test_lambda_alias(self):
        params = ModelParams.model_validate({"lambda": 2.0, "rho": 1.0})
        assert params.lam == 2.0
        assert params.mode == "step"
        assert ModelParams(lam=1.0, rho=1.0).mode == "stationary"

    def test_lambda_below_rho(self):
        with pytest.raises(ValidationError):
            ModelParams(lam=0.5, rho=1.0)

    def test_labels_strictly_increasing(self):
        with pytest.raises(ValidationError):
            ScalingFrame(t=1000.0, r_list=[0.0, 0.0])

    def test_rho_positive(self):
        with pytest.raises(ValidationError):
            ScalingFrame(t=8.0, delta=2.0, r_list=[0.0])

    def test_time_window(self):
        with pytest.raises(ValidationError):
            ScalingFrame(t=2e7, r_list=[0.0])


class TestSimulationSchemas:
    """Test cases for InitialConfig, NoiseGrid and SimulationConfig."""

    def test_initial_must_start_at_zero(self):
        with pytest.raises(ValueError):
            InitialConfig(zeta=np.array([1.0, 2.0]), lam=1.0, rho=1.0)

    def test_initial_must_be_ordered(self):
        with pytest.raises(ValueError):
            InitialConfig(zeta=np.array([0.0, 2.0, 1.0]), lam=1.0, rho=1.0)

    def test_noise_grid_properties(self):
        noise = NoiseGrid.zeros(4, 0.25, 8)
        assert noise.n_particles == 4
        assert noise.T == 2.0
        np.testing.assert_allclose(noise.times, 0.25 * np.arange(9))

    def test_steps_for(self):
        assert SimulationConfig(time_steps=17).steps_for(1000.0) == 17
        # h <= 10 / 200 needs about 20000 steps at t = 1000
        assert 20000 <= SimulationConfig().steps_for(1000.0) <= 20001
        assert SimulationConfig().steps_for(1.0) == 2000


class TestExperimentConfig:
    """Test cases for ExperimentConfig."""

    def test_comma_lists(self):
        config = ExperimentConfig(r_list="0,0.5,1", s_grid="-1, 0 ,1")
        assert config.r_list == [0.0, 0.5, 1.0]
        assert config.s_grid == [-1.0, 0.0, 1.0]

    def test_invalid_frame(self):
        with pytest.raises(ValidationError):
            ExperimentConfig(t=8.0, delta=3.0)

    def test_hash_ignores_output(self):
        a = ExperimentConfig(seed=3, output="a.csv", workers=1)
        b = ExperimentConfig(seed=3, output="b.json", format="json", workers=4)
        assert a.config_hash() == b.config_hash()
        assert a.config_hash() != ExperimentConfig(seed=4).config_hash()

    def test_frame_property(self):
        config = ExperimentConfig(t=1000.0, delta=0.5, r_list=[0.0, 1.0])
        assert config.frame.rho == pytest.approx(0.95)
        assert config.simulation.batch_size == config.batch_size


class TestReports:
    """Test cases for ComparisonReport, VerifySummary and numerics value objects."""

    def _rows(self):
        return [
            CdfRow(s=0.0, F_empirical=0.5, F_formula=0.48, abs_diff=0.02),
            CdfRow(s=1.0, F_empirical=0.8, F_formula=0.75, abs_diff=0.05),
        ]

    def test_ks_must_match_rows(self):
        with pytest.raises(ValidationError):
            ComparisonReport(ks=0.02, n_samples=10, rows=self._rows(), seed=1)

    def test_passed(self):
        report = ComparisonReport(ks=0.05, n_samples=10, rows=self._rows(), tolerance=0.06, seed=1)
        assert report.passed
        assert not report.model_copy(update={"tolerance": 0.04}).passed

    def test_summary_failures(self):
        summary = VerifySummary(
            seed=1,
            checks=[
                CheckResult(name="a", measured=0.0, allowed=1.0, passed=True),
                CheckResult(name="b", measured=2.0, allowed=1.0, passed=False),
            ],
        )
        assert not summary.passed
        assert [check.name for check in summary.failures] == ["b"]

    def test_hermite_sign(self):
        with pytest.raises(ValidationError):
            HermitePoint(t=1.0, n=1, x=0.0, alpha=0.1, beta=0.1, log_abs_h=0.0, sign=1.0)

    def test_det_result_finite(self):
        with pytest.raises(ValueError):
            DetResult(value=float("nan"), order=10)
