# Copyright 2025 The listhyp Authors
# Licensed under the Apache License, Version 2.0

"""
Tests for the typer command-line interface.

Tests cover:
- analyze JSON/CSV output, --l override, determinism with --no-timestamp
- exit codes 2 (schema) and 3 (numeric) with diagnostics on stderr
- sweep-qy, simulate, oracle-check, gen, tradeoff and lemma2 commands
- gen output feeding analyze
"""

import csv
import json
from io import StringIO

import pytest
from typer.testing import CliRunner

from listhyp.core.constants import CSV_COLUMNS, EXIT_NUMERIC, EXIT_ORACLE_MISMATCH, EXIT_SCHEMA
from listhyp.models.report import OracleCheckSummary, OracleFailure
from listhyp.tools import cli
from listhyp.tools.cli import app

runner = CliRunner()


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


class TestAnalyze:
    """Tests for the analyze command."""

    def test_j3_report(self, j3_instance_file, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(app, ["analyze", "--instance", str(j3_instance_file), "--out", str(out)])
        assert result.exit_code == 0
        report = _read_json(out)
        assert report["spec_version"] == "1"
        assert report["eps_min"] == pytest.approx(0.15, abs=1e-12)
        assert report["lambda_star"] == pytest.approx(1.275, abs=1e-12)
        assert [entry["q_family"] for entry in report["meta_converse"]] == ["qstar", "uniform"]
        assert abs(report["meta_converse"][0]["identity_gap"]) <= 1e-9
        assert abs(report["info_spectrum"][0]["identity_gap"]) <= 1e-9

    def test_list_size_equal_to_m(self, j3_instance_file, tmp_path):
        out = tmp_path / "report.json"
        result = runner.invoke(
            app, ["analyze", "--instance", str(j3_instance_file), "--l", "3", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert _read_json(out)["eps_min"] == pytest.approx(0.0, abs=1e-12)

    def test_no_timestamp_is_byte_identical(self, j3_instance_file, tmp_path):
        outputs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            args = ["analyze", "--instance", str(j3_instance_file), "--no-timestamp", "--out", str(out)]
            assert runner.invoke(app, args).exit_code == 0
            outputs.append(out.read_bytes())
        assert outputs[0] == outputs[1]

    def test_csv_format(self, j3_instance_file, tmp_path):
        out = tmp_path / "report.csv"
        result = runner.invoke(
            app,
            ["analyze", "--instance", str(j3_instance_file), "--family", "qstar", "--format", "csv", "--out", str(out)],
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(StringIO(out.read_text(encoding="utf-8"))))
        assert list(rows[0]) == CSV_COLUMNS
        assert len(rows) == 1
        assert abs(float(rows[0]["gap_mc"])) <= 1e-9

    def test_stdout_when_no_out(self, j3_instance_file):
        result = runner.invoke(app, ["analyze", "--instance", str(j3_instance_file), "--no-timestamp"])
        assert result.exit_code == 0
        assert '"spec_version": "1"' in result.stdout

    def test_malformed_json_exits_2(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json", encoding="utf-8")
        result = runner.invoke(app, ["analyze", "--instance", str(bad)])
        assert result.exit_code == EXIT_SCHEMA

    def test_missing_file_exits_2(self, tmp_path):
        result = runner.invoke(app, ["analyze", "--instance", str(tmp_path / "nope.json")])
        assert result.exit_code == EXIT_SCHEMA

    def test_unnormalized_exits_3(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text(
            json.dumps({"M": 2, "L": 1, "outcome_labels": ["a"], "P_XY": [[0.5], [0.6]]}), encoding="utf-8"
        )
        result = runner.invoke(app, ["analyze", "--instance", str(bad)])
        assert result.exit_code == EXIT_NUMERIC

    def test_bad_family_exits_2(self, j3_instance_file):
        result = runner.invoke(app, ["analyze", "--instance", str(j3_instance_file), "--family", "nope"])
        assert result.exit_code == EXIT_SCHEMA


class TestSweep:
    """Tests for the sweep-qy command."""

    def test_dirichlet_rows(self, j3_instance_file, tmp_path):
        out = tmp_path / "sweep.csv"
        result = runner.invoke(
            app, ["sweep-qy", "--instance", str(j3_instance_file), "--family", "dirichlet:7:100", "--out", str(out)]
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(StringIO(out.read_text(encoding="utf-8"))))
        assert len(rows) == 100
        assert all(float(row["mc_bound"]) <= float(row["eps_min"]) + 1e-9 for row in rows)

    def test_json_format(self, j3_instance_file, tmp_path):
        out = tmp_path / "sweep.json"
        result = runner.invoke(
            app,
            ["sweep-qy", "--instance", str(j3_instance_file), "--family", "qstar", "--format", "json", "--out", str(out)],
        )
        assert result.exit_code == 0
        assert _read_json(out)[0]["lambda_opt"] == pytest.approx(1.275, abs=1e-10)

    def test_bad_family_exits_2(self, j3_instance_file):
        result = runner.invoke(app, ["sweep-qy", "--instance", str(j3_instance_file), "--family", "dirichlet:1"])
        assert result.exit_code == EXIT_SCHEMA


class TestGenAndSimulate:
    """Tests for gen, simulate and their composition with analyze."""

    def test_gen_feeds_analyze(self, tmp_path):
        instance = tmp_path / "gen.json"
        result = runner.invoke(
            app, ["gen", "--m", "3", "--card-y", "3", "--l", "2", "--seed", "42", "--out", str(instance)]
        )
        assert result.exit_code == 0
        body = _read_json(instance)
        assert body["M"] == 3 and body["L"] == 2 and len(body["P_XY"][0]) == 3

        report = tmp_path / "report.json"
        result = runner.invoke(app, ["analyze", "--instance", str(instance), "--out", str(report)])
        assert result.exit_code == 0
        assert _read_json(report)["oracle"]["meta_converse_tight"] is True

    def test_gen_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            runner.invoke(app, ["gen", "--m", "4", "--card-y", "5", "--seed", "9", "--out", str(path)])
        assert a.read_bytes() == b.read_bytes()

    def test_gen_product_channel(self, tmp_path):
        spec = tmp_path / "bsc.json"
        spec.write_text(
            json.dumps({"prior": [0.5, 0.5], "channel": [[0.9, 0.1], [0.1, 0.9]], "n": 2}), encoding="utf-8"
        )
        out = tmp_path / "bsc_instance.json"
        result = runner.invoke(app, ["gen", "--product-channel", str(spec), "--out", str(out)])
        assert result.exit_code == 0
        body = _read_json(out)
        assert body["outcome_labels"] == ["0,0", "0,1", "1,0", "1,1"]

        report = tmp_path / "report.json"
        runner.invoke(app, ["analyze", "--instance", str(out), "--out", str(report)])
        assert _read_json(report)["eps_min"] == pytest.approx(0.1, abs=1e-12)

    def test_gen_bad_list_size_exits_3(self):
        result = runner.invoke(app, ["gen", "--m", "2", "--l", "3"])
        assert result.exit_code == EXIT_NUMERIC

    def test_simulate_noiseless(self, tmp_path):
        instance = tmp_path / "noiseless.json"
        instance.write_text(
            json.dumps({"M": 2, "L": 1, "outcome_labels": ["a", "b"], "P_XY": [[0.4, 0.0], [0.0, 0.6]]}),
            encoding="utf-8",
        )
        out = tmp_path / "sim.json"
        result = runner.invoke(
            app, ["simulate", "--instance", str(instance), "--samples", "10000", "--seed", "4", "--out", str(out)]
        )
        assert result.exit_code == 0
        assert _read_json(out)["empirical"] == 0.0

    def test_simulate_reads_stdin(self, j3_instance_file):
        result = runner.invoke(
            app,
            ["simulate", "--instance", "-", "--samples", "1000", "--no-timestamp"],
            input=j3_instance_file.read_text(encoding="utf-8"),
        )
        assert result.exit_code == 0
        assert '"samples": 1000' in result.stdout


class TestOracleCheck:
    """Tests for the oracle-check command."""

    def test_generated_instances_pass(self, tmp_path):
        out = tmp_path / "oracle.json"
        result = runner.invoke(app, ["oracle-check", "--count", "5", "--seed", "1", "--out", str(out)])
        assert result.exit_code == 0
        assert _read_json(out)["passed"] is True

    def test_given_instance(self, j3_instance_file, tmp_path):
        out = tmp_path / "oracle.json"
        result = runner.invoke(app, ["oracle-check", "--instance", str(j3_instance_file), "--out", str(out)])
        assert result.exit_code == 0
        assert _read_json(out)["count"] == 1

    def test_mismatch_exits_4(self, monkeypatch, tmp_path):
        failure = OracleFailure(instance_index=0, M=2, L=1, cardY=2, check="brute_min_error", expected=0.1, actual=0.2)

        def fake_run(count, seed, instance=None):
            return OracleCheckSummary(count=1, seed=seed, checks_run=1, passed=False, failures=[failure])

        monkeypatch.setattr(cli, "run_oracle_check", fake_run)
        result = runner.invoke(app, ["oracle-check", "--count", "1", "--out", str(tmp_path / "o.json")])
        assert result.exit_code == EXIT_ORACLE_MISMATCH

    @pytest.mark.slow
    def test_two_hundred_instances(self, tmp_path):
        out = tmp_path / "oracle.json"
        result = runner.invoke(app, ["oracle-check", "--count", "200", "--seed", "1", "--out", str(out)])
        assert result.exit_code == 0


class TestTradeoffAndLemma2:
    """Tests for the tradeoff and lemma2 commands."""

    def test_tradeoff_csv(self, j3_instance_file, tmp_path):
        out = tmp_path / "curve.csv"
        result = runner.invoke(
            app, ["tradeoff", "--instance", str(j3_instance_file), "--points", "11", "--out", str(out)]
        )
        assert result.exit_code == 0
        rows = list(csv.DictReader(StringIO(out.read_text(encoding="utf-8"))))
        assert list(rows[0]) == ["beta", "alpha"]
        assert len(rows) == 11

    def test_lemma2_record(self, j3_instance_file, tmp_path):
        out = tmp_path / "lemma2.json"
        result = runner.invoke(
            app, ["lemma2", "--instance", str(j3_instance_file), "--q-y", "[0.5, 0.5, 0.0]", "--out", str(out)]
        )
        assert result.exit_code == 0
        record = _read_json(out)
        assert record["y_bar"] == 2
        assert record["eps1_hat"] == pytest.approx(1 / 3, abs=1e-12)
        assert record["alpha_after"] == pytest.approx(0.575, abs=1e-12)

    def test_lemma2_precondition_exits_3(self, j3_instance_file):
        result = runner.invoke(
            app, ["lemma2", "--instance", str(j3_instance_file), "--q-y", "[0.2, 0.3, 0.5]"]
        )
        assert result.exit_code == EXIT_NUMERIC

    def test_lemma2_bad_json_exits_2(self, j3_instance_file):
        result = runner.invoke(app, ["lemma2", "--instance", str(j3_instance_file), "--q-y", "[0.2,"])
        assert result.exit_code == EXIT_SCHEMA
