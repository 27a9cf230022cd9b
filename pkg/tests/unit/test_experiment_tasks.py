"""Unit tests for the queued compare task."""
from unittest.mock import patch

import pytest

from app.core.errors import NumericalConsistencyError
from app.schemas.experiment import ComparisonReport
from app.tasks.experiment_tasks import run_compare_task


class TestRunCompareTask:
    """Test cases for run_compare_task."""

    @patch("app.tasks.experiment_tasks.ExperimentService")
    def test_returns_report_dict(self, mock_service_class):
        mock_service_class.return_value.run_compare.return_value = ComparisonReport(ks=0.0, n_samples=3, seed=7)

        result = run_compare_task.run({"t": 1000.0, "trials": 3, "seed": 7})

        assert result["seed"] == 7
        assert result["n_samples"] == 3
        config = mock_service_class.call_args.args[0]
        assert config.trials == 3

    def test_invalid_config_is_not_retried(self):
        with patch.object(run_compare_task, "retry") as mock_retry:
            with pytest.raises(ValueError):
                run_compare_task.run({"t": 8.0, "delta": 3.0})
            mock_retry.assert_not_called()

    @patch("app.tasks.experiment_tasks.ExperimentService")
    def test_lab_error_is_not_retried(self, mock_service_class):
        mock_service_class.return_value.run_compare.side_effect = NumericalConsistencyError("1.2 outside [0, 1]")
        with patch.object(run_compare_task, "retry") as mock_retry:
            with pytest.raises(NumericalConsistencyError):
                run_compare_task.run({"t": 1000.0})
            mock_retry.assert_not_called()

    @patch("app.tasks.experiment_tasks.ExperimentService")
    def test_transient_error_is_retried(self, mock_service_class):
        mock_service_class.return_value.run_compare.side_effect = OSError("disk full")
        with patch.object(run_compare_task, "retry", side_effect=RuntimeError("retry")) as mock_retry:
            with pytest.raises(RuntimeError):
                run_compare_task.run({"t": 1000.0})
            assert mock_retry.call_args.kwargs["countdown"] == 60
