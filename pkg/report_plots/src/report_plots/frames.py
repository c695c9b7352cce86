"""Parsing and validation of the run-output file contract.

The renderers read only the public files a run emits -- series.csv,
summary.json, verdict.json -- never any internal state, so the solver
package stays fully testable without this one.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

REQUIRED_COLUMNS = (
    "t", "M", "Q", "E", "Qu", "Qv", "E1", "E2",
    "w_u1", "w_v1", "w_u2", "eta", "eta_d2_fd", "eta_d2_rhs", "P",
    "r_mass", "r_moment", "r_energy",
)


class MissingColumnError(ValueError):
    def __init__(self, column: str, path):
        super().__init__(f"series file {path} is missing required column {column!r}")
        self.column = column


class SeriesFormatError(ValueError):
    pass


@dataclass
class SeriesFrame:
    """Columns of a diagnostics series keyed by header name."""

    path: str
    columns: dict

    @property
    def t(self) -> np.ndarray:
        return self.columns["t"]

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


def load_series(path) -> SeriesFrame:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip()
        names = header.split(",")
        for required in REQUIRED_COLUMNS:
            if required not in names:
                raise MissingColumnError(required, path)
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # empty files are reported below
                data = np.loadtxt(fh, delimiter=",", ndmin=2)
        except ValueError as exc:
            raise SeriesFormatError(f"cannot parse {path}: {exc}") from exc
    if data.size == 0:
        raise SeriesFormatError(f"series file {path} has no data rows")
    if data.shape[1] != len(names):
        raise SeriesFormatError(
            f"series file {path} has {data.shape[1]} fields per row "
            f"but {len(names)} header names"
        )
    columns = {name: data[:, i] for i, name in enumerate(names)}
    t = columns["t"]
    if len(t) > 1 and np.any(np.diff(t) <= 0):
        raise SeriesFormatError(f"series file {path} needs strictly increasing t")
    return SeriesFrame(str(path), columns)


def load_json(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
