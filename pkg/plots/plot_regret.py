#!/usr/bin/env python3
"""Mean pseudo-regret curves with +-2 SE bands from harness CSVs.

Usage:
    plot_regret.py --out FIG.png LABEL=CSV [LABEL=CSV ...]

All CSVs must share the same checkpoint grid.  One shaded band per series;
a single-trial CSV yields a zero-width band.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from csv_schema import SchemaError, load_run


def parse_series(tokens: list[str]) -> list[tuple[str, str]]:
    series = []
    for tok in tokens:
        label, sep, path = tok.partition("=")
        if not sep or not label or not path:
            raise SchemaError(f"expected LABEL=CSV, got {tok!r}")
        series.append((label, path))
    return series


def plot_regret(series: list[tuple[str, str]], out_png: str) -> None:
    if not series:
        raise SchemaError("need at least one LABEL=CSV series")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    grid_ref = None
    for label, path in series:
        run = load_run(path, require_elapsed=True)
        grid = run.t_grid
        if grid_ref is None:
            grid_ref = grid
        elif not np.array_equal(grid, grid_ref):
            raise SchemaError(f"{path}: t grid differs from the first series")
        mat = run.trial_matrix(run.cum_regret)
        mean = mat.mean(axis=0)
        if mat.shape[0] > 1:
            se = mat.std(axis=0, ddof=1) / np.sqrt(mat.shape[0])
        else:
            se = np.zeros_like(mean)
        line, = ax.plot(grid, mean, label=label, linewidth=1.8)
        ax.fill_between(grid, mean - 2 * se, mean + 2 * se,
                        color=line.get_color(), alpha=0.25, linewidth=0)
    ax.set_xlabel("round t")
    ax.set_ylabel("pseudo-regret")
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(out_png, dpi=150)
    plt.close(fig)


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", required=True, help="output PNG path")
    parser.add_argument("series", nargs="+", metavar="LABEL=CSV")
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        plot_regret(parse_series(args.series), args.out)
    except (SchemaError, OSError) as exc:
        print(f"plot_regret: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
