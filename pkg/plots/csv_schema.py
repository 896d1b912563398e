"""Shared loader for harness CSV files.

Schema: header ``trial,t,cum_regret,resamples,elapsed_ns``; the elapsed_ns
column is optional for tools that can degrade gracefully.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

FULL_HEADER = ["trial", "t", "cum_regret", "resamples", "elapsed_ns"]


class SchemaError(ValueError):
    pass


@dataclass
class RunData:
    path: str
    trial: np.ndarray      # int
    t: np.ndarray          # int
    cum_regret: np.ndarray
    resamples: np.ndarray
    elapsed_ns: np.ndarray | None

    @property
    def t_grid(self) -> np.ndarray:
        return np.unique(self.t)

    def trial_matrix(self, column: np.ndarray) -> np.ndarray:
        """Rows = trials, columns = the shared t grid; every trial must cover
        the full grid."""
        grid = self.t_grid
        trials = np.unique(self.trial)
        out = np.empty((trials.size, grid.size))
        for k, tr in enumerate(trials):
            mask = self.trial == tr
            tt, vv = self.t[mask], column[mask]
            if tt.size != grid.size or not np.array_equal(np.sort(tt), grid):
                raise SchemaError(f"{self.path}: trial {tr} does not cover the common t grid")
            out[k] = vv[np.argsort(tt)]
        return out


def load_run(path: str, require_elapsed: bool = True) -> RunData:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SchemaError(f"{path}: empty file") from None
        if header == FULL_HEADER:
            has_elapsed = True
        elif header == FULL_HEADER[:4] and not require_elapsed:
            has_elapsed = False
        else:
            raise SchemaError(f"{path}: header {header!r} does not match harness schema")
        rows = [row for row in reader if row]
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    cols = list(zip(*rows))
    try:
        trial = np.array([int(x) for x in cols[0]])
        t = np.array([int(x) for x in cols[1]])
        cum = np.array([float(x) for x in cols[2]])
        res = np.array([float(x) for x in cols[3]])
        elapsed = np.array([float(x) for x in cols[4]]) if has_elapsed else None
    except (ValueError, IndexError) as exc:
        raise SchemaError(f"{path}: malformed row ({exc})") from None
    return RunData(path, trial, t, cum, res, elapsed)
