"""File formats: matrices (CSV and a binary format), label files, and the
key-value report schema.

All in-memory indices are 0-based. Error positions in parse messages are
1-based (editor convention). Numeric output uses 17 significant digits so
every float re-parses to the identical value.

Matrix CSV: one row per line, comma-separated finite reals. The default
``rows-are-points`` layout reads an N x D file into the internal D x N
matrix; ``columns-are-points`` reads the file as-is.

Matrix binary: magic bytes ``PMS1``, two 64-bit little-endian unsigned
integers D and N, then D*N 64-bit little-endian IEEE-754 doubles in
column-major order. The binary format is self-describing, so the layout
argument is ignored for it; loading auto-detects it from the magic bytes.

Labels: one nonnegative integer per line; values need not be contiguous and
are densified on load with the mapping reported back to the caller.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .datagen import SyntheticSpec
from .types import ClusteringReport, Params

MAGIC = b"PMS1"
ROWS_ARE_POINTS = "rows-are-points"
COLUMNS_ARE_POINTS = "columns-are-points"
REPORT_SCHEMA = "pmssc-report-v1"

_FLOAT_FMT = ".17g"


class ParseError(ValueError):
    """A file failed to parse; the message carries a 1-based row:col position."""


def _check_layout(layout: str) -> None:
    if layout not in (ROWS_ARE_POINTS, COLUMNS_ARE_POINTS):
        raise ValueError(f"unknown layout {layout!r}")


def load_matrix(path, layout: str = ROWS_ARE_POINTS) -> np.ndarray:
    """Load a matrix file (binary if it starts with the magic, else CSV)
    into the internal D x N points-as-columns form."""
    _check_layout(layout)
    path = Path(path)
    raw = path.read_bytes()
    if raw.startswith(MAGIC):
        return _load_binary(raw, path)
    return _load_csv(raw, path, layout)


def _load_binary(raw: bytes, path: Path) -> np.ndarray:
    header = len(MAGIC) + 16
    if len(raw) < header:
        raise ParseError(f"{path}: truncated binary header")
    dim, n = struct.unpack("<QQ", raw[len(MAGIC):header])
    expected = header + 8 * dim * n
    if len(raw) != expected:
        raise ParseError(
            f"{path}: expected {expected} bytes for a {dim}x{n} matrix, got {len(raw)}"
        )
    data = np.frombuffer(raw, dtype="<f8", offset=header)
    X = data.reshape((dim, n), order="F").astype(np.float64)
    if not np.all(np.isfinite(X)):
        bad = np.argwhere(~np.isfinite(X))[0]
        raise ParseError(f"{path}: non-finite value at entry ({bad[0]}, {bad[1]})")
    return X


def _load_csv(raw: bytes, path: Path, layout: str) -> np.ndarray:
    text = raw.decode("utf-8")
    rows: list[list[float]] = []
    width = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split(",")
        if width is None:
            width = len(fields)
        elif len(fields) != width:
            raise ParseError(
                f"{path}:{lineno}: expected {width} fields, got {len(fields)}"
            )
        row = []
        for colno, tok in enumerate(fields, start=1):
            try:
                value = float(tok)
            except ValueError:
                raise ParseError(
                    f"{path}:{lineno}:{colno}: not a number: {tok.strip()!r}"
                ) from None
            if not np.isfinite(value):
                raise ParseError(
                    f"{path}:{lineno}:{colno}: non-finite value {tok.strip()!r}"
                )
            row.append(value)
        rows.append(row)
    if not rows:
        raise ParseError(f"{path}: empty file")
    M = np.asarray(rows, dtype=np.float64)
    return M.T if layout == ROWS_ARE_POINTS else M


def save_matrix(X: np.ndarray, path, fmt: str = "binary",
                layout: str = ROWS_ARE_POINTS) -> None:
    """Write the internal D x N matrix as binary (lossless) or CSV."""
    _check_layout(layout)
    X = np.asarray(X, dtype=np.float64)
    path = Path(path)
    if fmt == "binary":
        with path.open("wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<QQ", X.shape[0], X.shape[1]))
            fh.write(np.ascontiguousarray(X, dtype="<f8").tobytes(order="F"))
    elif fmt == "csv":
        M = X.T if layout == ROWS_ARE_POINTS else X
        with path.open("w") as fh:
            for row in M:
                fh.write(",".join(format(v, _FLOAT_FMT) for v in row))
                fh.write("\n")
    else:
        raise ValueError(f"unknown matrix format {fmt!r}")


def load_labels(path) -> tuple[np.ndarray, dict[int, int]]:
    """Load one label per line; returns (dense labels, original->dense map)."""
    path = Path(path)
    values: list[int] = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        try:
            value = int(line.strip())
        except ValueError:
            raise ParseError(
                f"{path}:{lineno}: not an integer label: {line.strip()!r}"
            ) from None
        if value < 0:
            raise ParseError(f"{path}:{lineno}: negative label {value}")
        values.append(value)
    if not values:
        raise ParseError(f"{path}: empty file")
    raw = np.asarray(values, dtype=np.int64)
    uniq = np.unique(raw)
    mapping = {int(orig): dense for dense, orig in enumerate(uniq)}
    return np.searchsorted(uniq, raw).astype(np.int64), mapping


def save_labels(labels, path) -> None:
    Path(path).write_text("".join(f"{int(v)}\n" for v in labels))


def _format_value(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), _FLOAT_FMT)
    if isinstance(value, (list, tuple, np.ndarray)):
        return ",".join(_format_value(v) for v in value)
    return str(value)


def write_key_values(pairs: dict, path) -> None:
    with Path(path).open("w") as fh:
        for key, value in pairs.items():
            if value is None:
                continue
            fh.write(f"{key} = {_format_value(value)}\n")


def report_to_pairs(report: ClusteringReport) -> dict:
    pairs: dict = {"schema": REPORT_SCHEMA, "mode": report.mode,
                   "sampling": report.sampling}
    if report.params is not None:
        p = report.params
        pairs.update(
            num_subsets=p.num_subsets,
            sampling_rate=p.sampling_rate,
            sparsity=p.sparsity,
            clusters=p.num_clusters,
            epsilon=p.epsilon,
            seed=p.seed,
            threads=p.threads,
        )
    pairs["labels_path"] = report.labels_path
    pairs["runtime_seconds"] = report.runtime_seconds
    pairs["accuracy_pct"] = report.accuracy_pct
    pairs["sre_pct"] = report.sre_pct
    pairs["connectivity"] = report.connectivity
    if report.residuals is not None:
        pairs["residual_combined_mean"] = report.residuals.combined_mean
        pairs["residual_subset_means"] = report.residuals.per_subset_mean
    return pairs


def save_report(report: ClusteringReport, path) -> None:
    """Write a clustering report in the stable key-value schema."""
    write_key_values(report_to_pairs(report), path)


def _parse_value(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        pass
    if "," in text:
        try:
            return [float(tok) for tok in text.split(",")]
        except ValueError:
            pass
    return text


def load_report(path) -> dict:
    """Parse a key-value report back into a dict (floats exact)."""
    path = Path(path)
    out: dict = {}
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        if not line.strip():
            continue
        if "=" not in line:
            raise ParseError(f"{path}:{lineno}: expected 'key = value'")
        key, _, value = line.partition("=")
        out[key.strip()] = _parse_value(value)
    return out


@dataclass
class RunConfig:
    """Everything one CLI invocation needs."""

    params: Params
    input_path: Optional[str] = None
    labels_path: Optional[str] = None
    output_path: Optional[str] = None
    save_labels_path: Optional[str] = None
    layout: str = ROWS_ARE_POINTS
    sampling: str = "weighted"
    synthetic: Optional[SyntheticSpec] = None
    trials: int = 1
    baseline: bool = False
    require_coverage: bool = False
    emit_residuals: bool = False

    def __post_init__(self):
        _check_layout(self.layout)
        if self.input_path is None and self.synthetic is None:
            raise ValueError("either an input path or a synthetic spec is required")
        if self.input_path is not None and not str(self.input_path):
            raise ValueError("input path must be nonempty")
