"""Command-line contract: flags, formats, exit codes and determinism."""

from __future__ import annotations

import json

import pytest

from medaux.cli import main

POP_CSV = "x,y\n" + "\n".join(
    f"{x},{x * 2 + (i % 7)}" for i, x in enumerate(range(10, 70))
)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture()
def pop_csv(tmp_path):
    path = tmp_path / "pop.csv"
    path.write_text(POP_CSV, encoding="utf-8")
    return str(path)


class TestParamsCommand:
    def test_builtin_pop1_prints_published_ratio(self, capsys):
        code, out, _ = run_cli(capsys, "params", "--params", "popI")
        assert code == 0
        assert "R = 0.97244" in out

    def test_builtin_pop2_prints_gap(self, capsys):
        code, out, _ = run_cli(capsys, "params", "--params", "popII")
        assert code == 0
        assert "b = -239" in out

    def test_input_and_params_conflict(self, capsys, pop_csv):
        with pytest.raises(SystemExit) as exc:
            main(["params", "--input", pop_csv, "--params", "popI"])
        assert exc.value.code == 2

    def test_missing_file_is_data_error(self, capsys):
        code, _, err = run_cli(capsys, "params", "--params", "no_such_file.json")
        assert code == 1
        assert "error" in err

    def test_csv_extraction(self, capsys, pop_csv):
        code, out, _ = run_cli(capsys, "params", "--input", pop_csv, "--n", "12")
        assert code == 0
        assert "median_x = 39.5" in out

    def test_known_density_flags(self, capsys, pop_csv):
        code, out, _ = run_cli(
            capsys, "params", "--input", pop_csv, "--n", "12",
            "--density", "known", "--fy", "0.01", "--fx", "0.02",
        )
        assert code == 0
        assert "fy_at_median = 0.01" in out

    def test_json_format(self, capsys):
        code, out, _ = run_cli(capsys, "params", "--params", "popI", "--format", "json")
        doc = json.loads(out)
        assert doc["N"] == 69
        assert abs(doc["median_ratio"] - 2011 / 2068) < 1e-12


class TestTableCommand:
    def test_full_row_set(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--params", "popI", "--format", "json")
        rows = json.loads(out)["rows"]
        assert code == 0
        assert len(rows) == 17
        names = [r["estimator"] for r in rows]
        assert names[0] == "M_y" and "t_mq9" in names

    def test_selected_pair_shares_minimum(self, capsys):
        code, out, _ = run_cli(
            capsys, "table", "--params", "popI",
            "--estimators", "t_m,M_d3", "--format", "json",
        )
        rows = json.loads(out)["rows"]
        assert rows[0]["analytic_mse"] == rows[1]["analytic_mse"]

    def test_unknown_estimator_is_usage_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["table", "--params", "popI", "--estimators", "bogus"])
        assert exc.value.code == 2

    def test_csv_header_and_precision(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--params", "popI", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "estimator,analytic_mse,analytic_bias,empirical_mse,pre"
        assert lines[1].startswith("M_y,565443.5")  # two decimals by default

    def test_precision_flag_is_display_only(self, capsys):
        _, low, _ = run_cli(
            capsys, "table", "--params", "popI", "--format", "csv", "--precision", "0"
        )
        _, full, _ = run_cli(
            capsys, "table", "--params", "popI", "--format", "json"
        )
        assert "565444" in low
        rows = json.loads(full)["rows"]
        assert abs(rows[0]["analytic_mse"] - 565443.57) < 1.0

    def test_markdown_table(self, capsys):
        code, out, _ = run_cli(capsys, "table", "--params", "popII", "--format", "md")
        assert out.startswith("| estimator |")
        assert "| --- |" in out.splitlines()[1]

    def test_json_roundtrip_preserves_values(self, capsys):
        _, out, _ = run_cli(capsys, "table", "--params", "popI", "--format", "json")
        first = json.loads(out)
        again = json.dumps(first, indent=2) + "\n"
        assert json.loads(again) == first


class TestSimulateCommand:
    ARGS = (
        "simulate",
        "--synthetic", "N=200,mu_x=4,sigma_x=0.4,mu_y=4,sigma_y=0.4,rho=0.7,seed=5",
        "--n", "25", "--reps", "40", "--seed", "9",
    )

    def test_fixed_seed_is_byte_identical(self, capsys):
        _, first, _ = run_cli(capsys, *self.ARGS, "--format", "json")
        _, second, _ = run_cli(capsys, *self.ARGS, "--format", "json")
        assert first == second

    def test_jobs_do_not_change_output(self, capsys):
        _, serial, _ = run_cli(capsys, *self.ARGS, "--format", "csv", "--jobs", "1")
        _, threaded, _ = run_cli(capsys, *self.ARGS, "--format", "csv", "--jobs", "4")
        assert serial == threaded

    def test_zero_reps_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main([*self.ARGS[:-2], "--reps", "0"])
        assert exc.value.code == 2

    def test_non_numeric_synthetic_value(self, capsys):
        code, _, err = run_cli(
            capsys, "simulate", "--synthetic", "N=abc", "--n", "5", "--reps", "1"
        )
        assert code == 1
        assert "non-numeric" in err

    def test_negative_precision_is_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["table", "--params", "popI", "--precision", "-1"])
        assert exc.value.code == 2

    def test_census_zeroes_empirical_column(self, capsys, pop_csv):
        code, out, _ = run_cli(
            capsys, "simulate", "--input", pop_csv, "--n", "60", "--reps", "1",
            "--seed", "1", "--estimators", "M_y,M_r,M_d", "--format", "csv",
        )
        assert code == 0
        for line in out.splitlines()[1:]:
            assert line.split(",")[3] == "0.00"

    def test_config_file_supplies_settings(self, capsys, tmp_path, pop_csv):
        cfg = tmp_path / "sim.json"
        cfg.write_text(
            json.dumps({"n": 20, "reps": 10, "seed": 3, "estimators": "M_y,M_d"}),
            encoding="utf-8",
        )
        code, out, _ = run_cli(
            capsys, "simulate", "--input", pop_csv, "--config", str(cfg),
            "--format", "json",
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["config"]["reps"] == 10
        assert [r["estimator"] for r in doc["rows"]] == ["M_y", "M_d"]

    def test_flags_override_config_file(self, capsys, tmp_path, pop_csv):
        cfg = tmp_path / "sim.json"
        cfg.write_text(json.dumps({"n": 20, "reps": 10, "seed": 3}), encoding="utf-8")
        code, out, _ = run_cli(
            capsys, "simulate", "--input", pop_csv, "--config", str(cfg),
            "--reps", "5", "--format", "json",
        )
        assert json.loads(out)["config"]["reps"] == 5

    def test_detail_section_reports_failures(self, capsys, pop_csv):
        code, out, _ = run_cli(
            capsys, "simulate", "--input", pop_csv, "--n", "10", "--reps", "8",
            "--seed", "2", "--format", "json",
        )
        detail = json.loads(out)["detail"]
        assert all(d["failures"] == 0 for d in detail)


class TestCompareCommand:
    def test_pop1_all_pass(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--params", "popI")
        assert code == 0
        assert "5/5 checks passed" in out

    def test_pop2_all_pass(self, capsys):
        code, out, _ = run_cli(capsys, "compare", "--params", "popII")
        assert code == 0
        assert "5/5 checks passed" in out

    def test_degenerate_pivot_flagged(self, capsys, tmp_path):
        flat = tmp_path / "flat.json"
        flat.write_text(
            json.dumps(
                {
                    "N": 100, "n": 20, "median_y": 50, "median_x": 50,
                    "fy_at_median": 0.01, "fx_at_median": 0.012, "rho_c": 0.4,
                }
            ),
            encoding="utf-8",
        )
        code, out, _ = run_cli(capsys, "compare", "--params", str(flat))
        assert code == 0
        assert "degenerate pivot" in out

    def test_tmq_preset_scalars(self, capsys):
        code, out, _ = run_cli(
            capsys, "compare", "--params", "popI", "--tmq-preset", "t_mq7"
        )
        assert code == 0
        assert "5/5 checks passed" in out

    def test_non_shrunk_preset_rejected(self, capsys):
        code, _, err = run_cli(
            capsys, "compare", "--params", "popI", "--tmq-preset", "M_r"
        )
        assert code == 1
        assert "single-weight" in err


class TestEnvironmentDefaults:
    def test_format_env_var(self, capsys, monkeypatch):
        monkeypatch.setenv("MEDAUX_FORMAT", "md")
        _, out, _ = run_cli(capsys, "table", "--params", "popI", "--estimators", "M_y")
        assert out.startswith("| estimator |")

    def test_bad_env_value_falls_back_to_csv(self, capsys, monkeypatch):
        monkeypatch.setenv("MEDAUX_FORMAT", "xml")
        _, out, _ = run_cli(capsys, "table", "--params", "popI", "--estimators", "M_y")
        assert out.startswith("estimator,")
