"""Command line interface tests: exit codes, file outputs, determinism."""

import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from c3ma.cli import main
from c3ma.fileio import (
    read_compact_json,
    read_data_matrix_csv,
    read_symmetric_matrix_mm,
    write_data_matrix_csv,
    write_symmetric_matrix_mm,
)


@pytest.fixture
def fixture_csv(tmp_path):
    """Data matrix whose sample covariance has eigenvalues (4, 1, 0, 0)."""
    x = np.zeros((4, 2))
    x[0, 0] = 2.0 * np.sqrt(2.0)
    x[1, 1] = np.sqrt(2.0)
    path = tmp_path / "x.csv"
    write_data_matrix_csv(path, x)
    return str(path)


class TestSolve:
    def test_happy_path_with_outputs(self, fixture_csv, tmp_path, capsys):
        compact = tmp_path / "out.json"
        dense = tmp_path / "out.mtx"
        result = tmp_path / "result.json"
        code = main(
            [
                "solve", "--input", fixture_csv, "--kappa", "3",
                "--algorithm", "mod-svd", "--compact", str(compact),
                "--dense", str(dense), "--result", str(result),
            ]
        )
        assert code == 0
        record = json.loads(result.read_text())
        assert record["schemaVersion"] == 1
        assert record["algorithm"] == "mod-svd"
        assert record["mu"] == pytest.approx(13 / 12, abs=1e-9)
        assert record["alpha"] == 1 and record["beta"] == 2
        assert record["kappaAchieved"] == pytest.approx(3.0, rel=1e-10)
        assert record["wallTimeMs"] > 0
        loaded = read_compact_json(str(compact))
        assert loaded.columns.shape[0] == 4
        s_hat = read_symmetric_matrix_mm(str(dense))
        eigs = np.sort(np.linalg.eigvalsh(s_hat))
        assert eigs[-1] / eigs[0] == pytest.approx(3.0, rel=1e-8)

    def test_result_to_stdout(self, fixture_csv, capsys):
        assert main(["solve", "--input", fixture_csv, "--kappa", "3"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["mu"] == pytest.approx(13 / 12, abs=1e-9)
        assert record["n"] == 2

    def test_all_algorithms_agree(self, fixture_csv, capsys):
        mus = []
        for algorithm in ("fu-spt", "gr-svd", "mod-svd"):
            assert main(
                ["solve", "--input", fixture_csv, "--kappa", "3", "--algorithm", algorithm]
            ) == 0
            mus.append(json.loads(capsys.readouterr().out)["mu"])
        assert max(mus) - min(mus) <= 1e-12

    def test_reference_backend(self, fixture_csv, capsys):
        assert main(
            ["solve", "--input", fixture_csv, "--kappa", "3",
             "--algorithm", "gr-svd", "--backend", "reference"]
        ) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["mu"] == pytest.approx(13 / 12, abs=1e-9)

    def test_kappa_below_one_exits_2(self, tmp_path, capsys):
        s = tmp_path / "s.mtx"
        write_symmetric_matrix_mm(s, np.diag([2.0, 1.0]))
        assert main(["solve", "--cov", str(s), "--kappa", "0.5"]) == 2

    def test_zero_matrix_exits_3(self, tmp_path, capsys):
        s = tmp_path / "zero.mtx"
        write_symmetric_matrix_mm(s, np.zeros((3, 3)))
        assert main(["solve", "--cov", str(s), "--kappa", "10"]) == 3

    def test_cov_with_svd_algorithm_exits_2(self, tmp_path, capsys):
        s = tmp_path / "s.mtx"
        write_symmetric_matrix_mm(s, np.diag([2.0, 1.0]))
        assert main(["solve", "--cov", str(s), "--kappa", "10", "--algorithm", "mod-svd"]) == 2

    def test_cov_happy_path(self, tmp_path, capsys):
        s = tmp_path / "s.mtx"
        write_symmetric_matrix_mm(s, np.diag([4.0, 1.0, 0.0, 0.0]))
        assert main(["solve", "--cov", str(s), "--kappa", "3"]) == 0
        record = json.loads(capsys.readouterr().out)
        assert record["algorithm"] == "fu-spt"
        assert record["n"] is None
        assert record["mu"] == pytest.approx(13 / 12, abs=1e-9)

    def test_missing_source_is_usage_error(self):
        with pytest.raises(SystemExit) as err:
            main(["solve", "--kappa", "3"])
        assert err.value.code == 2

    def test_missing_file_exits_2(self, capsys):
        assert main(["solve", "--input", "/nonexistent.csv", "--kappa", "3"]) == 2


class TestSimulate:
    def test_deterministic_golden_bytes(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        for path in (a, b):
            assert main(["simulate", "--p", "4", "--n", "2", "--seed", "7", "--out", str(path)]) == 0
        assert a.read_bytes() == b.read_bytes()
        from c3ma.datagen import rng_for

        expected = rng_for(7, 1).standard_normal((4, 2))
        np.testing.assert_array_equal(read_data_matrix_csv(str(a)), expected)

    def test_conditioned_covariance_source(self, tmp_path):
        out = tmp_path / "c.csv"
        assert main(
            ["simulate", "--p", "6", "--n", "4", "--seed", "1",
             "--sigma-cond-exp", "1", "--out", str(out)]
        ) == 0
        assert read_data_matrix_csv(str(out)).shape == (6, 4)


class TestBench:
    def test_csv_has_three_rows_per_group(self, tmp_path, capsys):
        out = tmp_path / "bench.csv"
        summary = tmp_path / "summary.csv"
        code = main(
            ["bench", "--n", "4", "--p-list", "6,8", "--reps", "3",
             "--seed", "0", "--out", str(out), "--summary-out", str(summary)]
        )
        assert code == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        assert len(rows) == 3 * 2 * 3  # reps x p-values x algorithms
        for algorithm in ("fu-spt", "gr-svd", "mod-svd"):
            group = [r for r in rows if r["algorithm"] == algorithm and r["p"] == "6"]
            assert len(group) == 3
            assert all(float(r["seconds"]) > 0 for r in group)
        summary_rows = list(csv.DictReader(summary.read_text().splitlines()))
        assert len(summary_rows) == 6
        assert {"meanSeconds", "medianSeconds"} <= set(summary_rows[0])

    def test_too_few_reps_exits_2(self, capsys):
        assert main(["bench", "--n", "4", "--p-list", "6", "--reps", "2"]) == 2

    def test_bad_p_list_exits_2(self, capsys):
        assert main(["bench", "--n", "4", "--p-list", "6,two", "--reps", "3"]) == 2

    def test_p_below_n_exits_2(self, capsys):
        assert main(["bench", "--n", "8", "--p-list", "4", "--reps", "3"]) == 2


class TestTrace:
    def test_columns_and_library_crosscheck(self, tmp_path):
        out = tmp_path / "trace.csv"
        code = main(
            ["trace", "--p", "12", "--n", "8", "--sigma-cond-exp", "1",
             "--kappa-min", "2", "--kappa-max", "4", "--kappa-step", "2",
             "--seed", "3", "--out", str(out)]
        )
        assert code == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        assert [r["kappa"] for r in rows] == ["2", "4"]
        header = rows[0].keys()
        assert list(header) == [
            "kappa", "alpha", "beta", "mu", "nu",
            "diffAlpha", "diffBeta", "kappaMu", "kappaNu", "inInterval",
        ]
        # cross-check against the library on identical seeded data
        from c3ma.analysis import trace_path
        from c3ma.datagen import SigmaSpec, make_sigma, sample_mvn
        from c3ma.pipeline import spectrum_of_data

        _, form = make_sigma(SigmaSpec(12, 1.0, "linear", 3))
        x = sample_mvn(form, 8, (3, 1))
        path = trace_path(spectrum_of_data(x), np.array([2.0, 4.0]))
        for idx, row in enumerate(rows):
            assert float(row["mu"]) == path.mu_seq[idx]
            assert int(row["alpha"]) == path.alpha_seq[idx]
        assert rows[0]["diffBeta"] == str(path.diff_beta[0])
        assert rows[1]["diffBeta"] == ""  # no successor
        assert rows[0]["inInterval"] in ("true", "false")

    def test_bad_grid_exits_2(self, capsys):
        assert main(
            ["trace", "--p", "4", "--n", "2", "--sigma-cond-exp", "1",
             "--kappa-min", "0.5", "--kappa-max", "2", "--kappa-step", "0.5"]
        ) == 2


class TestSpectrum:
    def test_consistency_regime_means_near_one(self, tmp_path):
        out = tmp_path / "spec.csv"
        code = main(
            ["spectrum", "--p", "5", "--n", "2000", "--reps", "3",
             "--seed", "0", "--out", str(out)]
        )
        assert code == 0
        rows = list(csv.DictReader(out.read_text().splitlines()))
        assert len(rows) == 5
        values = np.array([float(r["meanEigenvalue"]) for r in rows])
        assert np.abs(values - 1.0).max() < 0.1

    def test_respects_thread_cap_env(self, tmp_path, monkeypatch):
        out_a = tmp_path / "a.csv"
        out_b = tmp_path / "b.csv"
        main(["spectrum", "--p", "4", "--n", "10", "--reps", "5", "--seed", "2", "--out", str(out_a)])
        monkeypatch.setenv("C3MA_THREADS", "3")
        main(["spectrum", "--p", "4", "--n", "10", "--reps", "5", "--seed", "2", "--out", str(out_b)])
        assert out_a.read_text() == out_b.read_text()


def test_console_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "c3ma.cli", "--help"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert "solve" in proc.stdout and "bench" in proc.stdout
