import json
import math

import pytest

from main import main
from src.cli.commands import format_number
from src.cli.config_loader import parse_config, serialize_config
from src.cli.report_writer import emit_report, read_report, render_report, rows_equal, theory_nv
from src.models.records import TheoryParams
from src.models.report import ExperimentConfig, OutputRow, VariancePoint, VarianceReport
from src.utils.config import Config
from src.utils.errors import ConfigParseError, ConfigurationError, ReportWriteError

HEADER = "strategy,c_target,c_bar,c_bar_std,n_copies,nv,nv_std,theory_nv,seed"

SMALL_CAMPAIGN = """\
# 小さなキャンペーン
strategies=SCM,OST
c_grid=0.2,0.8
m_pairs=2
n_copies=20
n_repeats=3
r_runs=2
"""


def write_config(tmp_path, text: str, name: str = "campaign.env") -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


def sample_report() -> VarianceReport:
    config = ExperimentConfig(strategies=("SCM", "TT"), seed=42)
    points = [
        VariancePoint("SCM", 0.5, 900, c_bar=0.5012, c_bar_std=0.003,
                      v_tilde=0.75 / 900, v_tilde_std=0.02 / 900),
        VariancePoint("TT", 0.3, 900, error="boom"),
    ]
    return VarianceReport(config=config, points=points)


class TestConfigParsing:
    def test_empty_file_gives_defaults(self, tmp_path):
        config = parse_config(write_config(tmp_path, ""))
        assert config == ExperimentConfig()
        assert (config.m_pairs, config.n_copies, config.n_repeats, config.r_runs) == (100, 900, 20, 10)
        assert config.alpha == 1 / 30
        assert config.c_t == 4 / 11

    def test_range_error_names_key(self, tmp_path):
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(write_config(tmp_path, "gamma=1.5\n"))
        assert excinfo.value.key == "gamma"

    def test_unknown_key(self, tmp_path):
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(write_config(tmp_path, "copies=900\n"))
        assert excinfo.value.key == "copies"

    def test_type_mismatch(self, tmp_path):
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(write_config(tmp_path, "m_pairs=abc\n"))
        assert excinfo.value.key == "m_pairs"

    def test_unknown_strategy(self, tmp_path):
        with pytest.raises(ConfigParseError) as excinfo:
            parse_config(write_config(tmp_path, "strategies=TT,XYZ\n"))
        assert excinfo.value.key == "strategies"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigurationError):
            parse_config(str(tmp_path / "missing.env"))

    def test_values_are_normalized(self, tmp_path):
        text = "strategies=tt, scm ,ost\nalpha=1/30\nbootstrap=yes\nc_grid=0,1/4,0.5\n"
        config = parse_config(write_config(tmp_path, text))
        assert config.strategies == ("TT", "SCM", "OST")
        assert config.alpha == 1 / 30
        assert config.bootstrap is True
        assert config.c_grid == (0.0, 0.25, 0.5)

    def test_serialized_config_round_trips(self, tmp_path):
        config = parse_config(write_config(tmp_path, "alpha=1/30\nseed=7\nstrategies=TP,ADAPTIVE\n"))
        again = parse_config(write_config(tmp_path, serialize_config(config), "again.env"))
        assert again == config
        assert serialize_config(again) == serialize_config(config)


class TestReportOutput:
    def test_empty_report_is_header_only(self):
        report = VarianceReport(config=ExperimentConfig())
        assert render_report(report, "csv") == HEADER + "\n"
        assert json.loads(render_report(report, "json")) == []

    def test_scm_row(self):
        lines = render_report(sample_report(), "csv").splitlines()
        assert lines[0] == HEADER
        row = dict(zip(HEADER.split(","), lines[1].split(",")))
        assert row["strategy"] == "SCM"
        assert row["nv"] == "0.75"
        assert row["theory_nv"] == "0.75"
        assert row["seed"] == "42"

    def test_failed_point_is_written_as_nan(self):
        lines = render_report(sample_report(), "csv").splitlines()
        assert lines[2].split(",")[5] == "nan"

    def test_theory_column(self):
        assert theory_nv("SCM", 0.5) == pytest.approx(0.75)
        assert theory_nv("ADAPTIVE", 0.2) == pytest.approx(3.75 * 0.16)
        assert theory_nv("ADAPTIVE", 0.8) == pytest.approx(0.36)
        # η≠0.5 では二値検出の補正推定量（Γ=1, η=0.5 なら SCM と一致する式）
        assert theory_nv("OST", 0.5, TheoryParams(eta=0.3)) > theory_nv("SCM", 0.5)

    def test_csv_and_json_round_trip(self, tmp_path):
        report = sample_report()
        emit_report(report, "csv", str(tmp_path / "out" / "report.csv"))
        emit_report(report, "json", str(tmp_path / "out" / "report.json"))
        from_csv = read_report(str(tmp_path / "out" / "report.csv"))
        from_json = read_report(str(tmp_path / "out" / "report.json"))
        assert rows_equal(from_csv, from_json)
        assert [row.strategy for row in from_csv] == ["SCM", "TT"]
        assert from_csv[0].theory_nv == 0.75
        assert isinstance(from_json[0], OutputRow)

    def test_json_mirrors_field_names(self):
        records = json.loads(render_report(sample_report(), "json"))
        assert list(records[0]) == HEADER.split(",")

    def test_json_writes_null_for_missing_values(self):
        def reject(constant):
            raise ValueError(constant)

        text = render_report(sample_report(), "json")
        assert "NaN" not in text
        records = json.loads(text, parse_constant=reject)
        assert records[1]["nv"] is None
        assert records[1]["theory_nv"] is not None
        assert records[0]["nv"] == 0.75

    def test_single_run_std_is_null_in_json(self, tmp_path):
        config = ExperimentConfig(strategies=("SCM",), r_runs=1)
        point = VariancePoint("SCM", 0.5, 900, c_bar=0.5, c_bar_std=math.nan,
                              v_tilde=0.75 / 900, v_tilde_std=math.nan)
        path = str(tmp_path / "single.json")
        emit_report(VarianceReport(config=config, points=[point]), "json", path)
        record = json.loads((tmp_path / "single.json").read_text(encoding="utf-8"))[0]
        assert record["nv_std"] is None
        assert math.isnan(read_report(path)[0].nv_std)

    def test_unwritable_path(self, tmp_path):
        with pytest.raises(ReportWriteError) as excinfo:
            emit_report(sample_report(), "csv", str(tmp_path))
        assert excinfo.value.path == str(tmp_path)

    def test_unknown_format(self):
        with pytest.raises(ConfigurationError):
            render_report(sample_report(), "xml")


class TestFormatNumber:
    def test_nine_significant_digits(self):
        assert format_number(1.0) == "1.0"
        assert format_number(4 / 11) == "0.363636364"
        assert format_number(0.0) == "0.0"


class TestMain:
    def test_theory(self, capsys):
        assert main(["theory", "--strategy", "scm", "--c", "0", "--n", "900"]) == 0
        assert capsys.readouterr().out.splitlines() == ["Nv = 1.0", "v = 0.00111111111"]

    def test_theory_rejects_out_of_range_overlap(self):
        assert main(["theory", "--strategy", "scm", "--c", "1.5"]) == 1

    def test_theory_unknown_strategy(self):
        assert main(["theory", "--strategy", "xyz", "--c", "0.5"]) == 1

    def test_crossover(self, capsys):
        assert main(["crossover", "--a", "tp", "--b", "scm"]) == 0
        assert capsys.readouterr().out.strip() == "0.363636364"

    def test_overhead(self, capsys):
        assert main(["overhead", "--strategy", "scm", "--c", "0.5", "--eps", "0.01", "--prob", "0.05"]) == 0
        assert capsys.readouterr().out.strip() == "150000"

    def test_unknown_flag_is_usage_error(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["theory", "--strategy", "scm", "--c", "0.5", "--bogus"])
        assert excinfo.value.code == 2

    def test_bad_config_exits_nonzero(self, tmp_path):
        assert main(["benchmark", write_config(tmp_path, "gamma=1.5\n")]) == 1
        assert main(["benchmark", str(tmp_path / "missing.env")]) == 1

    def test_benchmark_writes_report(self, tmp_path):
        config = write_config(tmp_path, SMALL_CAMPAIGN)
        out = str(tmp_path / "report.csv")
        assert main(["benchmark", config, "--out", out, "--seed", "5"]) == 0
        rows = read_report(out)
        assert [(row.strategy, row.c_target) for row in rows] == [
            ("SCM", 0.2), ("SCM", 0.8), ("OST", 0.2), ("OST", 0.8)
        ]
        assert all(row.seed == 5 and row.n_copies == 20 for row in rows)

    def test_relative_output_uses_report_dir(self, tmp_path, monkeypatch):
        monkeypatch.setattr(Config, "REPORT_DIR", str(tmp_path / "reports"))
        config = write_config(tmp_path, SMALL_CAMPAIGN)
        assert main(["benchmark", config, "--out", "small.csv"]) == 0
        assert len(read_report(str(tmp_path / "reports" / "small.csv"))) == 4

    def test_benchmark_output_is_byte_identical(self, tmp_path):
        config = write_config(tmp_path, SMALL_CAMPAIGN)
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        assert main(["benchmark", config, "--out", str(first), "--format", "json"]) == 0
        assert main(["benchmark", config, "--out", str(second), "--format", "json", "--threads", "3"]) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_benchmark_to_stdout(self, tmp_path, capsys):
        assert main(["benchmark", write_config(tmp_path, SMALL_CAMPAIGN)]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == HEADER
        assert len(lines) == 5

    def test_kappa_fit(self, capsys):
        assert main(["kappa-fit", "--n-grid", "30,90", "--samples", "100", "--repeats", "2", "--seed", "3"]) == 0
        lines = capsys.readouterr().out.strip().splitlines()
        assert lines[0].startswith("N = 30: 1-F = ")
        assert lines[-1].startswith("kappa = ")

    @pytest.mark.slow
    def test_oracle_check_on_defaults(self, tmp_path, capsys):
        assert main(["oracle-check", write_config(tmp_path, "")]) == 0
        assert "FAIL" not in capsys.readouterr().out
