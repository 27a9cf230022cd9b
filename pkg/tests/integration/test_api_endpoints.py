import pytest
from unittest.mock import Mock, patch

from app import __version__
from app.core.errors import NumericalConsistencyError


class TestAPIEndpoints:
    """Integration tests for API endpoints."""

    def test_health_check(self, client):
        """Test health check endpoint."""
        response = client.get("/health")
        assert response.status_code == 200
        assert response.json() == {"status": "healthy", "version": __version__}

    @patch('app.routes.limit_law.limit_cdf')
    def test_limit_cdf(self, mock_limit_cdf, client):
        """Test /limit-cdf endpoint."""
        mock_limit_cdf.return_value = (0.42, "finite-step")

        response = client.post("/limit-cdf", json={"r_list": [0.0], "s_list": [0.5], "delta": 0.5})

        assert response.status_code == 200
        assert response.json() == {"value": 0.42, "law": "finite-step"}
        frame, s_list, nodes = mock_limit_cdf.call_args.args
        assert frame.delta == 0.5
        assert s_list == [0.5]
        assert nodes is None

    @patch('app.routes.limit_law.limit_cdf')
    def test_limit_cdf_numerical_failure(self, mock_limit_cdf, client):
        """A probability outside [0, 1] is reported as unprocessable."""
        mock_limit_cdf.side_effect = NumericalConsistencyError("distribution value 1.2 outside [0, 1]")

        response = client.post("/limit-cdf", json={"r_list": [0.0], "s_list": [0.0]})

        assert response.status_code == 422
        assert "outside" in response.json()["detail"]

    @patch('app.routes.limit_law.limit_cdf')
    def test_limit_cdf_unexpected_error(self, mock_limit_cdf, client):
        mock_limit_cdf.side_effect = RuntimeError("boom")

        response = client.post("/limit-cdf", json={"r_list": [0.0], "s_list": [0.0]})

        assert response.status_code == 500
        assert "Internal server error" in response.json()["detail"]

    def test_limit_cdf_invalid_labels(self, client):
        """Labels must be strictly increasing."""
        response = client.post("/limit-cdf", json={"r_list": [1.0, 0.0], "s_list": [0.0, 0.0]})
        assert response.status_code == 422

    def test_limit_cdf_missing_field(self, client):
        response = client.post("/limit-cdf", json={"r_list": [0.0]})
        assert response.status_code == 422

    @patch('app.routes.limit_law.increment_density')
    def test_increment_density(self, mock_density, client):
        """Test /increment-density endpoint."""
        mock_density.return_value = [0.28, 0.2]

        response = client.post("/increment-density", json={"r2": 1.0, "sigma_list": [0.0, 1.0]})

        assert response.status_code == 200
        data = response.json()
        assert data["sigma"] == [0.0, 1.0]
        assert data["density"] == [0.28, 0.2]
        assert data["gaussian"][0] == pytest.approx(1.0 / (4.0 * 3.141592653589793) ** 0.5)

    def test_increment_density_label_window(self, client):
        response = client.post("/increment-density", json={"r2": 5.0, "sigma_list": [0.0]})
        assert response.status_code == 422

    @patch('app.routes.experiments.run_compare_task')
    def test_submit_compare(self, mock_task, client):
        """Test /experiments/compare endpoint."""
        mock_task.delay.return_value = Mock(id="task-123")

        response = client.post("/experiments/compare", json={"t": 1000.0, "delta": 0.5, "trials": 500, "seed": 7})

        assert response.status_code == 202
        assert response.json() == {"task_id": "task-123", "status": "queued"}
        payload = mock_task.delay.call_args.args[0]
        assert payload["trials"] == 500
        assert payload["r_list"] == [0.0]

    @patch('app.routes.experiments.run_compare_task')
    def test_submit_compare_queue_down(self, mock_task, client):
        mock_task.delay.side_effect = ConnectionError("redis unreachable")

        response = client.post("/experiments/compare", json={"t": 1000.0})

        assert response.status_code == 503
        assert "Task queue unavailable" in response.json()["detail"]

    def test_submit_compare_invalid_config(self, client):
        response = client.post("/experiments/compare", json={"t": 8.0, "delta": 3.0})
        assert response.status_code == 422

    @patch('app.routes.experiments.AsyncResult')
    def test_get_finished_experiment(self, mock_result_class, client):
        """Test /experiments/{task_id} endpoint."""
        mock_result = Mock(state="SUCCESS", result={"ks": 0.01, "seed": 7})
        mock_result.successful.return_value = True
        mock_result_class.return_value = mock_result

        response = client.get("/experiments/task-123")

        assert response.status_code == 200
        data = response.json()
        assert data["state"] == "SUCCESS"
        assert data["report"] == {"ks": 0.01, "seed": 7}
        assert data["error"] is None

    @patch('app.routes.experiments.AsyncResult')
    def test_get_failed_experiment(self, mock_result_class, client):
        mock_result = Mock(state="FAILURE", result=ValueError("bad frame"))
        mock_result.successful.return_value = False
        mock_result.failed.return_value = True
        mock_result_class.return_value = mock_result

        response = client.get("/experiments/task-9")

        assert response.status_code == 200
        assert response.json()["error"] == "bad frame"

    @patch('app.routes.experiments.AsyncResult')
    def test_get_pending_experiment(self, mock_result_class, client):
        mock_result = Mock(state="PENDING")
        mock_result.successful.return_value = False
        mock_result.failed.return_value = False
        mock_result_class.return_value = mock_result

        response = client.get("/experiments/unknown")

        assert response.status_code == 200
        assert response.json()["state"] == "PENDING"
        assert response.json()["report"] is None
