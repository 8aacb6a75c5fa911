import numpy as np
import pytest

from pmssc.io import (
    COLUMNS_ARE_POINTS,
    ParseError,
    RunConfig,
    load_labels,
    load_matrix,
    load_report,
    save_labels,
    save_matrix,
    save_report,
)
from pmssc.metrics import ResidualDiagnostics
from pmssc.types import ClusteringReport, Params


class TestMatrixCsv:
    def test_rows_are_points_transposes(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,0\n0,1\n")
        X = load_matrix(path)
        assert np.array_equal(X, np.eye(2))
        assert np.array_equal(X[:, 0], [1.0, 0.0])

    def test_columns_are_points_reads_as_is(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2,3\n4,5,6\n")
        X = load_matrix(path, layout=COLUMNS_ARE_POINTS)
        assert X.shape == (2, 3)
        assert np.array_equal(X[:, 2], [3.0, 6.0])

    def test_nan_rejected_with_position(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3,nan\n")
        with pytest.raises(ParseError, match=r"2:2"):
            load_matrix(path)

    def test_garbage_rejected_with_position(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\nx,4\n")
        with pytest.raises(ParseError, match=r"2:1"):
            load_matrix(path)

    def test_ragged_rows_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("1,2\n3\n")
        with pytest.raises(ParseError, match="fields"):
            load_matrix(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("")
        with pytest.raises(ParseError, match="empty"):
            load_matrix(path)

    def test_csv_round_trip_is_exact(self, tmp_path):
        X = np.random.default_rng(0).standard_normal((4, 7))
        path = tmp_path / "m.csv"
        save_matrix(X, path, fmt="csv")
        assert np.array_equal(load_matrix(path), X)


class TestMatrixBinary:
    def test_round_trip_bit_identical(self, tmp_path):
        X = np.random.default_rng(1).standard_normal((5, 9))
        path = tmp_path / "m.bin"
        save_matrix(X, path, fmt="binary")
        out = load_matrix(path)
        assert out.shape == X.shape
        assert np.array_equal(out.view(np.uint64), X.view(np.uint64))

    def test_header_layout(self, tmp_path):
        X = np.arange(6.0).reshape(2, 3)
        path = tmp_path / "m.bin"
        save_matrix(X, path, fmt="binary")
        raw = path.read_bytes()
        assert raw[:4] == b"PMS1"
        assert int.from_bytes(raw[4:12], "little") == 2
        assert int.from_bytes(raw[12:20], "little") == 3
        # column-major payload
        assert np.frombuffer(raw, "<f8", offset=20)[1] == X[1, 0]

    def test_truncated_payload_rejected(self, tmp_path):
        X = np.ones((2, 2))
        path = tmp_path / "m.bin"
        save_matrix(X, path, fmt="binary")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(ParseError, match="bytes"):
            load_matrix(path)


class TestLabels:
    def test_plain_labels(self, tmp_path):
        path = tmp_path / "l.txt"
        path.write_text("0\n0\n1\n")
        labels, mapping = load_labels(path)
        assert labels.tolist() == [0, 0, 1]
        assert mapping == {0: 0, 1: 1}

    def test_densification_with_mapping(self, tmp_path):
        path = tmp_path / "l.txt"
        path.write_text("5\n5\n9\n")
        labels, mapping = load_labels(path)
        assert labels.tolist() == [0, 0, 1]
        assert mapping == {5: 0, 9: 1}

    def test_empty_rejected(self, tmp_path):
        path = tmp_path / "l.txt"
        path.write_text("")
        with pytest.raises(ParseError, match="empty"):
            load_labels(path)

    def test_non_integer_rejected(self, tmp_path):
        path = tmp_path / "l.txt"
        path.write_text("0\nfoo\n")
        with pytest.raises(ParseError, match="2"):
            load_labels(path)

    def test_save_load_round_trip(self, tmp_path):
        path = tmp_path / "l.txt"
        save_labels(np.array([2, 0, 1, 1]), path)
        labels, _ = load_labels(path)
        assert labels.tolist() == [2, 0, 1, 1]


class TestReport:
    def make_report(self):
        return ClusteringReport(
            labels=np.array([0, 1]),
            runtime_seconds=1.2345678901234567,
            mode="pmssc",
            sampling="weighted",
            accuracy_pct=100.0,
            sre_pct=12.34567890123456789,
            connectivity=0.1 + 0.2,
            residuals=ResidualDiagnostics(np.array([0.1, 0.05]), 0.025),
            params=Params(num_subsets=4, sampling_rate=0.3, sparsity=2,
                          num_clusters=2, seed=9, threads=1),
            labels_path="out/labels.txt",
        )

    def test_report_contains_metrics_and_params(self, tmp_path):
        path = tmp_path / "report.txt"
        save_report(self.make_report(), path)
        text = path.read_text()
        assert "accuracy_pct = 100" in text
        assert "num_subsets = 4" in text
        assert "labels_path = out/labels.txt" in text

    def test_numeric_round_trip_is_exact(self, tmp_path):
        report = self.make_report()
        path = tmp_path / "report.txt"
        save_report(report, path)
        loaded = load_report(path)
        assert loaded["accuracy_pct"] == 100
        assert loaded["sre_pct"] == report.sre_pct
        assert loaded["connectivity"] == report.connectivity
        assert loaded["runtime_seconds"] == report.runtime_seconds
        assert loaded["residual_combined_mean"] == 0.025
        assert loaded["residual_subset_means"] == [0.1, 0.05]
        assert loaded["seed"] == 9

    def test_missing_metrics_are_omitted(self, tmp_path):
        report = ClusteringReport(labels=np.array([0]), runtime_seconds=0.5)
        path = tmp_path / "report.txt"
        save_report(report, path)
        loaded = load_report(path)
        assert "accuracy_pct" not in loaded
        assert "sre_pct" not in loaded
        assert loaded["runtime_seconds"] == 0.5

    def test_unwritable_path_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            save_report(self.make_report(), tmp_path / "missing" / "report.txt")


def test_run_config_requires_a_dataset():
    params = Params(num_subsets=1, sampling_rate=1.0, sparsity=1, num_clusters=2)
    with pytest.raises(ValueError, match="input path"):
        RunConfig(params=params)
    RunConfig(params=params, input_path="data.csv")
