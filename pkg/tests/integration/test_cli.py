from unittest.mock import patch

from app.cli import EXIT_OK, EXIT_TOLERANCE, EXIT_USAGE, main
from app.schemas.experiment import CdfRow, ComparisonReport


class TestCommandLine:
    """Integration tests for the kpz-lab command line."""

    def test_verify_quick_subset(self, tmp_path):
        out = tmp_path / "verify.csv"
        code = main(["verify", "--profile", "quick", "--check", "oracle", "--check", "det_identity", "--out", str(out)])
        assert code == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "name,measured,allowed,passed"
        assert [line.split(",")[0] for line in lines[1:]] == ["oracle_equivalence", "det_identity"]

    def test_verify_unknown_check(self):
        assert main(["verify", "--check", "nonexistent"]) == EXIT_USAGE

    def test_bad_flag_value(self):
        assert main(["compare", "--t", "abc"]) == EXIT_USAGE

    def test_missing_mode(self):
        assert main([]) == EXIT_USAGE

    def test_invalid_frame(self):
        assert main(["limit-cdf", "--t", "8", "--delta", "3"]) == EXIT_USAGE

    def test_help(self, capsys):
        assert main(["--help"]) == EXIT_OK
        assert "verify" in capsys.readouterr().out

    @patch("app.services.experiment_service.airy_stat_fdd", return_value=0.3)
    def test_limit_cdf_joint_value(self, mock_stat, tmp_path):
        out = tmp_path / "cdf.csv"
        assert main(["limit-cdf", "--r", "0", "--s", "0", "--out", str(out)]) == EXIT_OK
        assert out.read_text().splitlines() == ["law,stationary", "F,0.29999999999999999"]

    def test_limit_cdf_label_mismatch(self):
        assert main(["limit-cdf", "--r", "0", "--r", "1", "--s", "0", "--s", "1", "--s", "2"]) == EXIT_USAGE

    @patch("app.cli.ExperimentService")
    def test_compare_out_of_tolerance(self, mock_service_class, tmp_path):
        rows = [CdfRow(s=0.0, F_empirical=0.9, F_formula=0.5, abs_diff=0.4)]
        mock_service_class.return_value.run_compare.return_value = ComparisonReport(
            ks=0.4, n_samples=100, rows=rows, tolerance=0.1, seed=1
        )
        out = tmp_path / "report.csv"

        code = main(["compare", "--trials", "100", "--out", str(out)])

        assert code == EXIT_TOLERANCE
        assert out.read_text().splitlines()[1] == "0,0.90000000000000002,0.5,0.40000000000000002"

    def test_simulate_writes_samples(self, tmp_path):
        out = tmp_path / "samples.csv"
        assert main(["simulate", "--t", "8", "--trials", "3", "--seed", "5", "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "trial_id,r,X"
        assert [line.split(",")[0] for line in lines[1:]] == ["0", "1", "2"]

    def test_config_file(self, tmp_path):
        config = tmp_path / "run.env"
        config.write_text("t=8\nr=0,0.5\ntrials=2\nseed=3\n")
        out = tmp_path / "samples.csv"
        assert main(["simulate", "--config", str(config), "--out", str(out)]) == EXIT_OK
        lines = out.read_text().splitlines()
        assert len(lines) == 1 + 2 * 2
        assert lines[2].split(",")[1] == "0.5"

    def test_flags_override_config_file(self, tmp_path):
        config = tmp_path / "run.env"
        config.write_text("t=8\ntrials=5\n")
        out = tmp_path / "samples.csv"
        assert main(["simulate", "--config", str(config), "--trials", "1", "--out", str(out)]) == EXIT_OK
        assert len(out.read_text().splitlines()) == 2
